"""Engine configuration: one JSON document with per-module sections.

Every field has a default; an empty document is a complete configuration.
Unknown sections or keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import BadConfig, ConfigParseError, ConfigValidationError
from ..estimator import EstimatorConfig, ScoreMode
from ..feedback import FeedbackConfig
from ..game import DistractionKind, DistractionSpec, SessionConfig
from ..gaze import GateConfig
from ..ingest import DEFAULT_EEG_LABELS, DEFAULT_EEG_RATE_HZ, DEFAULT_GAZE_RATE_HZ


@dataclass(frozen=True)
class IngestConfig:
    eeg_rate_hz: float = DEFAULT_EEG_RATE_HZ
    eeg_channel_labels: tuple[str, ...] = DEFAULT_EEG_LABELS
    gaze_rate_hz: float = DEFAULT_GAZE_RATE_HZ

    def __post_init__(self):
        if self.eeg_rate_hz <= 0 or self.gaze_rate_hz <= 0:
            raise BadConfig("sample rates", "must be > 0")
        if not self.eeg_channel_labels:
            raise BadConfig("eeg_channel_labels", "need at least one channel")


@dataclass(frozen=True)
class DspConfig:
    window_s: float = 2.0
    segment_len: int = 256
    overlap_fraction: float = 0.5
    update_interval_s: float = 0.1  # score/feedback/telemetry cadence
    channels: tuple[int, ...] | None = None  # None = aggregate all channels

    def __post_init__(self):
        if self.window_s <= 0 or self.update_interval_s <= 0:
            raise BadConfig("dsp timing", "window_s and update_interval_s must be > 0")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise BadConfig("overlap_fraction", "must be in [0, 1)")
        if self.segment_len < 2 or self.segment_len & (self.segment_len - 1):
            raise BadConfig("segment_len", "must be a power of two >= 2")


@dataclass(frozen=True)
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8765
    sensor_host: str = "127.0.0.1"
    sensor_port: int = 7070
    client_queue: int = 64  # per-client telemetry buffer, drop-oldest

    def __post_init__(self):
        if self.client_queue < 1:
            raise BadConfig("client_queue", "must be >= 1")


@dataclass(frozen=True)
class EngineConfig:
    ingest: IngestConfig = dataclasses.field(default_factory=IngestConfig)
    dsp: DspConfig = dataclasses.field(default_factory=DspConfig)
    gaze: GateConfig = dataclasses.field(default_factory=GateConfig)
    estimator: EstimatorConfig = dataclasses.field(default_factory=EstimatorConfig)
    feedback: FeedbackConfig = dataclasses.field(default_factory=FeedbackConfig)
    game: SessionConfig = dataclasses.field(default_factory=SessionConfig)
    service: ServiceConfig = dataclasses.field(default_factory=ServiceConfig)


_SECTIONS = {
    "ingest": IngestConfig,
    "dsp": DspConfig,
    "gaze": GateConfig,
    "estimator": EstimatorConfig,
    "feedback": FeedbackConfig,
    "game": SessionConfig,
    "service": ServiceConfig,
}


def _coerce(section: str, name: str, value):
    if section == "estimator" and name == "mode":
        try:
            return ScoreMode(value)
        except ValueError:
            raise ConfigValidationError(f"{section}.{name}", f"unknown mode {value!r}") from None
    if section == "game" and name == "distractions":
        if not isinstance(value, list):
            raise ConfigValidationError(f"{section}.{name}", "expected a list")
        specs = []
        for item in value:
            try:
                specs.append(
                    DistractionSpec(float(item["at_s"]), DistractionKind(item.get("kind", "monster_scream")))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigValidationError(f"{section}.{name}", str(exc)) from None
        return tuple(specs)
    if isinstance(value, list):
        return tuple(value)
    return value


def _build_section(section: str, cls, data: dict):
    names = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in names:
            raise ConfigValidationError(f"{section}.{key}", "unknown key")
    kwargs = {k: _coerce(section, k, v) for k, v in data.items()}
    try:
        return cls(**kwargs)
    except BadConfig as exc:
        raise ConfigValidationError(f"{section}.{exc.field}", exc.reason) from None
    except (TypeError, ValueError) as exc:
        raise ConfigValidationError(section, str(exc)) from None


def config_from_obj(obj: dict) -> EngineConfig:
    if not isinstance(obj, dict):
        raise ConfigValidationError("document", "top level must be a JSON object")
    for key in obj:
        if key not in _SECTIONS:
            raise ConfigValidationError(key, "unknown section")
    sections = {
        name: _build_section(name, cls, obj.get(name, {})) for name, cls in _SECTIONS.items()
    }
    return EngineConfig(**sections)


def load_config(path: str | Path) -> EngineConfig:
    """Load a configuration file; {} yields all defaults."""
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(exc.msg, line=exc.lineno) from None
    return config_from_obj(obj)


def config_to_obj(config: EngineConfig) -> dict:
    """Dump with every field explicit; config_from_obj inverts this exactly."""
    out: dict = {}
    for name in _SECTIONS:
        section = getattr(config, name)
        data = {}
        for f in dataclasses.fields(section):
            value = getattr(section, f.name)
            if isinstance(value, ScoreMode):
                value = value.value
            elif name == "game" and f.name == "distractions":
                value = [{"at_s": d.at_s, "kind": d.kind.value} for d in value]
            elif isinstance(value, tuple):
                value = list(value)
            data[f.name] = value
        out[name] = data
    return out


def dumps_config(config: EngineConfig) -> str:
    return json.dumps(config_to_obj(config), indent=2)
