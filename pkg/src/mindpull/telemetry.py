"""Per-tick telemetry snapshot and its JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .feedback import FeedbackCommand


@dataclass(frozen=True)
class PullSnapshot:
    displacement_m: float
    applied_force_n: float
    velocity_mps: float

    def to_obj(self) -> dict:
        return {
            "displacement_m": self.displacement_m,
            "applied_force_n": self.applied_force_n,
            "velocity_mps": self.velocity_mps,
        }


@dataclass(frozen=True)
class TelemetryRecord:
    t_us: int
    phase: str
    score: float
    relative_alpha: float
    gate: float
    feedback: FeedbackCommand
    pull: PullSnapshot
    events: tuple[str, ...]

    def to_obj(self) -> dict:
        """Single JSON object with exactly these keys."""
        return {
            "t_us": self.t_us,
            "phase": self.phase,
            "score": self.score,
            "relative_alpha": self.relative_alpha,
            "gate": self.gate,
            "feedback": self.feedback.to_obj(),
            "pull": self.pull.to_obj(),
            "events": list(self.events),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj())


def parse_record(obj: dict) -> TelemetryRecord:
    fb = obj["feedback"]
    return TelemetryRecord(
        t_us=int(obj["t_us"]),
        phase=obj["phase"],
        score=float(obj["score"]),
        relative_alpha=float(obj["relative_alpha"]),
        gate=float(obj["gate"]),
        feedback=FeedbackCommand(
            fov_scale=float(fb["fov_scale"]),
            time_scale=float(fb["time_scale"]),
            audio_gain=float(fb["audio_gain"]),
            audio_rate=float(fb["audio_rate"]),
            vibe_amplitudes=tuple(float(a) for a in fb["vibe_amplitudes"]),
            traction_n=float(fb["traction_n"]),
            wind_on=bool(fb["wind_on"]),
        ),
        pull=PullSnapshot(
            displacement_m=float(obj["pull"]["displacement_m"]),
            applied_force_n=float(obj["pull"]["applied_force_n"]),
            velocity_mps=float(obj["pull"]["velocity_mps"]),
        ),
        events=tuple(obj["events"]),
    )
