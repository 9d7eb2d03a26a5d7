"""Configuration loading, validation, and round-tripping."""

import json

import pytest

from mindpull.errors import ConfigParseError, ConfigValidationError
from mindpull.estimator import ScoreMode
from mindpull.game import DistractionKind
from mindpull.service import EngineConfig, config_from_obj, config_to_obj, dumps_config, load_config


def test_empty_object_yields_all_defaults():
    assert config_from_obj({}) == EngineConfig()


def test_round_trip_is_identity():
    config = EngineConfig()
    assert config_from_obj(config_to_obj(config)) == config


def test_round_trip_with_overrides(tmp_path):
    doc = {
        "dsp": {"window_s": 4.0, "segment_len": 512},
        "estimator": {"mode": "time_avg", "min_samples": 10},
        "game": {
            "force_lo_n": 15.0,
            "distractions": [{"at_s": 5.0, "kind": "other"}, {"at_s": 9.0}],
        },
        "feedback": {"vibrator_count": 7},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    config = load_config(path)
    assert config.dsp.window_s == 4.0
    assert config.estimator.mode is ScoreMode.TIME_AVG
    assert config.game.distractions[0].kind is DistractionKind.OTHER
    assert config.game.distractions[1].kind is DistractionKind.MONSTER_SCREAM
    assert config.feedback.vibrator_count == 7
    assert config_from_obj(config_to_obj(config)) == config


def test_force_band_validation_error():
    with pytest.raises(ConfigValidationError) as err:
        config_from_obj({"game": {"force_lo_n": 60.0, "force_hi_n": 10.0}})
    assert "force" in err.value.field


def test_unknown_section_rejected():
    with pytest.raises(ConfigValidationError):
        config_from_obj({"haptics": {}})


def test_unknown_key_rejected():
    with pytest.raises(ConfigValidationError) as err:
        config_from_obj({"dsp": {"windw_s": 2.0}})
    assert "windw_s" in err.value.field


def test_bad_mode_rejected():
    with pytest.raises(ConfigValidationError):
        config_from_obj({"estimator": {"mode": "cubic"}})


def test_parse_error_carries_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dsp": {\n')
    with pytest.raises(ConfigParseError) as err:
        load_config(path)
    assert err.value.line is not None


def test_dumps_is_valid_json_with_all_sections():
    obj = json.loads(dumps_config(EngineConfig()))
    assert set(obj) == {"ingest", "dsp", "gaze", "estimator", "feedback", "game", "service"}
    assert obj["dsp"]["segment_len"] == 256
    assert obj["estimator"]["mode"] == "linear"


def test_top_level_must_be_object():
    with pytest.raises(ConfigValidationError):
        config_from_obj([1, 2, 3])
