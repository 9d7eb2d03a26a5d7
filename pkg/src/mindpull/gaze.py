"""Saccade detection and the gating factor that freezes score updates.

Classification is velocity-threshold (I-VT): a sample pair whose great-circle
angular velocity exceeds the threshold is a saccade. The continuous gate
level decays toward 0 during saccades (tau_drop) and recovers toward 1 during
fixation (tau_rise); while the current classification is saccade the
published gating factor is exactly 0, so the estimator freezes outright and
then re-engages gradually through the recovering gate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from statistics import median

from .errors import TimestampRegression


class Classification(str, enum.Enum):
    FIXATION = "fixation"
    SACCADE = "saccade"


@dataclass(frozen=True)
class GazeSample:
    timestamp_us: int
    yaw_deg: float
    pitch_deg: float

    def __post_init__(self):
        if not -180.0 <= self.yaw_deg <= 180.0:
            raise ValueError(f"yaw {self.yaw_deg} outside [-180, 180]")
        if not -90.0 <= self.pitch_deg <= 90.0:
            raise ValueError(f"pitch {self.pitch_deg} outside [-90, 90]")


@dataclass(frozen=True)
class GateConfig:
    threshold_dps: float = 30.0
    tau_drop_s: float = 0.05
    tau_rise_s: float = 0.5
    median_filter: bool = False  # 3-sample velocity median, for noisy replays

    def __post_init__(self):
        if self.threshold_dps <= 0 or self.tau_drop_s <= 0 or self.tau_rise_s <= 0:
            raise ValueError("threshold and time constants must be > 0")


@dataclass(frozen=True)
class GazeState:
    angular_velocity_dps: float = 0.0
    classification: Classification = Classification.FIXATION
    gate: float = 1.0

    @property
    def effective_gate(self) -> float:
        """Gating factor for the estimator: hard 0 mid-saccade, else the gate."""
        return 0.0 if self.classification is Classification.SACCADE else self.gate


def _direction(yaw_deg: float, pitch_deg: float) -> tuple[float, float, float]:
    yaw = math.radians(yaw_deg)
    pitch = math.radians(pitch_deg)
    return (
        math.cos(pitch) * math.cos(yaw),
        math.cos(pitch) * math.sin(yaw),
        math.sin(pitch),
    )


def angular_velocity(prev: GazeSample, curr: GazeSample) -> float:
    """Great-circle angle between the two gaze directions over dt, in deg/s."""
    if curr.timestamp_us <= prev.timestamp_us:
        raise TimestampRegression(f"t={curr.timestamp_us} after t={prev.timestamp_us}")
    u = _direction(prev.yaw_deg, prev.pitch_deg)
    v = _direction(curr.yaw_deg, curr.pitch_deg)
    dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    cx = u[1] * v[2] - u[2] * v[1]
    cy = u[2] * v[0] - u[0] * v[2]
    cz = u[0] * v[1] - u[1] * v[0]
    angle = math.degrees(math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), dot))
    return angle / ((curr.timestamp_us - prev.timestamp_us) / 1e6)


def classify(velocity_dps: float, threshold_dps: float) -> Classification:
    """Saccade iff velocity strictly exceeds the threshold."""
    return Classification.SACCADE if velocity_dps > threshold_dps else Classification.FIXATION


def update_gate(
    state: GazeState, classification: Classification, dt_s: float, config: GateConfig
) -> GazeState:
    """Exponential gate update: toward 0 during saccade, toward 1 in fixation."""
    if dt_s <= 0:
        raise ValueError("dt_s must be > 0")
    if classification is Classification.SACCADE:
        gate = state.gate * math.exp(-dt_s / config.tau_drop_s)
    else:
        gate = 1.0 + (state.gate - 1.0) * math.exp(-dt_s / config.tau_rise_s)
    gate = min(1.0, max(0.0, gate))
    return replace(state, classification=classification, gate=gate)


class GazeTracker:
    """Per-session consumer of gaze samples; single-owner, sequential."""

    def __init__(self, config: GateConfig | None = None):
        self.config = config or GateConfig()
        self.state = GazeState()
        self._prev: GazeSample | None = None
        self._recent_velocities: list[float] = []

    def push(self, sample: GazeSample) -> GazeState:
        if self._prev is None:
            self._prev = sample
            return self.state
        velocity = angular_velocity(self._prev, sample)
        dt_s = (sample.timestamp_us - self._prev.timestamp_us) / 1e6
        self._prev = sample
        if self.config.median_filter:
            self._recent_velocities.append(velocity)
            del self._recent_velocities[:-3]
            velocity = median(self._recent_velocities)
        cls = classify(velocity, self.config.threshold_dps)
        self.state = replace(
            update_gate(self.state, cls, dt_s, self.config), angular_velocity_dps=velocity
        )
        return self.state
