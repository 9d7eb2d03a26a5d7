"""Closed-loop engine: metric pipeline, headless scenarios, exit codes."""

import dataclasses
import json

import pytest

from mindpull.estimator import EstimatorConfig, ScoreMode
from mindpull.game import DistractionSpec, Phase, SessionConfig
from mindpull.ingest import (
    PiecewiseLinear,
    SyntheticProfile,
    ToneComponent,
    default_eeg_descriptor,
    merge_streams,
    synth_generate,
)
from mindpull.service import (
    EXIT_GAME_FAILURE,
    EXIT_SUCCESS,
    EXIT_ERROR,
    Engine,
    EngineConfig,
    MetricPipeline,
    build_scenario,
    parse_operator_command,
    run_headless,
    run_scenario,
)
from mindpull.service.config import DspConfig
from mindpull.telemetry import parse_record


def quick_config(**game_overrides):
    game = dict(baseline_s=4.0, conc_calib_s=3.0, pull_limit_s=20.0)
    game.update(game_overrides)
    return EngineConfig(
        estimator=EstimatorConfig(min_samples=10),
        game=SessionConfig(**game),
    )


class TestMetricPipeline:
    def test_metric_tracks_alpha_share(self):
        desc = default_eeg_descriptor()
        pipeline = MetricPipeline(DspConfig(), desc)
        profile = SyntheticProfile(
            components=(
                ToneComponent(10.0, PiecewiseLinear.constant(1.0)),
                ToneComponent(20.0, PiecewiseLinear.constant(1.0)),
            ),
        )
        assert pipeline.compute_metric() is None
        for frame in synth_generate(profile, desc, 2.5):
            pipeline.push_frame(frame)
        assert pipeline.ready
        assert pipeline.compute_metric() == pytest.approx(0.5, abs=0.05)

    def test_channel_subset(self):
        desc = default_eeg_descriptor()
        pipeline = MetricPipeline(DspConfig(channels=(0, 3)), desc)
        assert set(pipeline.windows) == {0, 3}

    def test_bad_channel_rejected(self):
        from mindpull.errors import ConfigValidationError

        with pytest.raises(ConfigValidationError):
            MetricPipeline(DspConfig(channels=(99,)), default_eeg_descriptor())


class TestHeadlessScenarios:
    def test_ramp_succeeds_before_limit(self, tmp_path):
        config = quick_config()
        out = tmp_path / "run.jsonl"
        code = run_headless(config, {"scenario": "ramp", "ramp_s": 5.0}, out)
        assert code == EXIT_SUCCESS
        records = [parse_record(json.loads(line)) for line in out.read_text().splitlines()]
        assert records[-1].phase == "success"
        assert records[-1].feedback.wind_on is True
        assert any("wind_on" in r.events for r in records)

    def test_flat_times_out(self, tmp_path):
        config = quick_config()
        out = tmp_path / "run.jsonl"
        code = run_headless(config, {"scenario": "flat"}, out)
        assert code == EXIT_GAME_FAILURE
        last = json.loads(out.read_text().splitlines()[-1])
        assert last["phase"] == "failure"
        assert any("failure:timeout" in json.loads(l)["events"] for l in out.read_text().splitlines())

    def test_bad_script_is_engine_error(self, tmp_path):
        code = run_headless(quick_config(), {"scenario": "nope"}, tmp_path / "x.jsonl")
        assert code == EXIT_ERROR

    def test_deterministic_output_bytes(self, tmp_path):
        config = quick_config()
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_headless(config, {"scenario": "ramp", "ramp_s": 5.0, "seed": 11}, a) == 0
        assert run_headless(config, {"scenario": "ramp", "ramp_s": 5.0, "seed": 11}, b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_different_seed_changes_noise_not_outcome(self, tmp_path):
        config = quick_config()
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_headless(config, {"scenario": "ramp", "ramp_s": 5.0, "seed": 1}, a) == 0
        assert run_headless(config, {"scenario": "ramp", "ramp_s": 5.0, "seed": 2}, b) == 0
        assert a.read_bytes() != b.read_bytes()

    def test_over_force_script_never_advances(self, tmp_path):
        config = quick_config(pull_limit_s=6.0)
        out = tmp_path / "yank.jsonl"
        code = run_headless(
            config, {"scenario": "ramp", "ramp_s": 2.0, "force_n": [[0.0, 200.0]]}, out
        )
        assert code == EXIT_GAME_FAILURE
        for line in out.read_text().splitlines():
            assert json.loads(line)["pull"]["displacement_m"] == 0.0

    def test_telemetry_is_parseable_and_ordered(self, tmp_path):
        out = tmp_path / "run.jsonl"
        run_headless(quick_config(), {"scenario": "ramp", "ramp_s": 5.0}, out)
        stamps = [json.loads(line)["t_us"] for line in out.read_text().splitlines()]
        assert stamps == sorted(stamps)
        assert len(stamps) > 50

    def test_recording_mirror_written(self, tmp_path):
        out = tmp_path / "run.jsonl"
        rec = tmp_path / "frames.jsonl"
        run_headless(quick_config(), {"scenario": "ramp", "ramp_s": 5.0}, out, record_path=rec)
        lines = rec.read_text().splitlines()
        assert json.loads(lines[0])["k"] == "desc"
        assert json.loads(lines[1])["k"] == "desc"
        kinds = {json.loads(l)["k"] for l in lines[2:]}
        assert kinds == {"eeg", "gaze"}

    def test_distraction_dip_lowers_score_after_cue(self):
        config = quick_config(
            pull_limit_s=30.0, distractions=(DistractionSpec(2.0),)
        )
        plain = build_scenario(config, {"scenario": "ramp", "ramp_s": 4.0})
        dipped = build_scenario(
            config,
            {"scenario": "ramp", "ramp_s": 4.0, "distraction_dip": True, "dip_factor": 0.3},
        )
        p_start = config.game.baseline_s + config.game.conc_calib_s
        alpha_plain = plain.profile.components[0].amplitude_uv
        alpha_dipped = dipped.profile.components[0].amplitude_uv
        inside = p_start + 2.0 + 1.0  # mid-dip
        assert alpha_dipped(inside) < alpha_plain(inside)
        after = p_start + 2.0 + 4.0  # dip over
        assert alpha_dipped(after) == pytest.approx(alpha_plain(after), rel=1e-9)


class TestEngineWiring:
    def test_run_stats_real_time_factor(self):
        config = quick_config()
        scenario = build_scenario(config, {"scenario": "ramp", "ramp_s": 5.0})
        engine, stats = run_scenario(config, scenario)
        assert engine.state.phase is Phase.SUCCESS
        assert stats.wall_s < stats.data_s  # faster than real time
        assert stats.max_tick_latency_s < 0.05

    def test_operator_force_overrides_script(self):
        config = quick_config()
        scenario = build_scenario(config, {"scenario": "ramp"})
        engine = Engine(config, force_fn=scenario.force_fn)
        engine.apply_command(parse_operator_command({"kind": "set_force", "newtons": 42.0}))
        assert engine.applied_force() == 42.0

    def test_parse_command_validation(self):
        with pytest.raises(ValueError):
            parse_operator_command({"kind": "warp_speed"})
        with pytest.raises(ValueError):
            parse_operator_command({"kind": "set_force"})
        with pytest.raises(ValueError):
            parse_operator_command({"kind": "set_force", "newtons": -3})
        with pytest.raises(ValueError):
            parse_operator_command({"kind": "set_mode", "mode": "banana"})
        with pytest.raises(ValueError):
            parse_operator_command([])

    def test_set_mode_command_applies(self):
        engine = Engine(quick_config())
        engine.apply_command(parse_operator_command({"kind": "set_mode", "mode": "time_avg"}))
        assert engine.state.estimator.config.mode.value == "time_avg"

    def test_time_avg_mode_ramp_also_succeeds(self, tmp_path):
        config = quick_config()
        config = dataclasses.replace(
            config, estimator=dataclasses.replace(config.estimator, mode=ScoreMode.TIME_AVG)
        )
        out = tmp_path / "avg.jsonl"
        assert run_headless(config, {"scenario": "ramp", "ramp_s": 5.0}, out) == EXIT_SUCCESS
