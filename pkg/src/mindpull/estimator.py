"""Per-user calibration and the calibrated, gated concentration score.

Calibration anchors the score: the baseline-phase mean of the alpha metric
maps to 0 and the concentration-phase mean to 1, linearly in between and
clamped outside. Two smoothing modes are selectable per session:

  linear   exponential smoothing toward the latest normalized value, with
           step fraction gate * (1 - exp(-dt/tau)); gate 0 freezes.
  time_avg weighted mean over a trailing window, each update admitted with
           weight gate; gate 0 performs no update (the window's time base
           pauses, so nothing expires during a freeze).
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

from .errors import InsufficientSamples, InvalidCalibration


class ScoreMode(str, enum.Enum):
    LINEAR = "linear"
    TIME_AVG = "time_avg"


@dataclass(frozen=True)
class EstimatorConfig:
    mode: ScoreMode = ScoreMode.LINEAR
    avg_window_s: float = 3.0
    ema_tau_s: float = 1.0
    margin: float = 0.01  # required conc_mean - base_mean separation
    min_samples: int = 20  # metric updates per calibration phase

    def __post_init__(self):
        if self.avg_window_s <= 0 or self.ema_tau_s <= 0:
            raise ValueError("avg_window_s and ema_tau_s must be > 0")
        if self.min_samples < 1:
            raise ValueError("min_samples must be >= 1")


@dataclass(frozen=True)
class CalibrationStats:
    base_mean: float
    base_std: float
    conc_mean: float
    conc_std: float
    sample_counts: tuple[int, int]


@dataclass(frozen=True)
class ConcentrationScore:
    value: float
    timestamp_us: int
    mode: ScoreMode

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"score {self.value} outside [0, 1]")


def _mean_std(xs: list[float]) -> tuple[float, float]:
    n = len(xs)
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / n
    return mean, math.sqrt(var)


def calibrate(
    baseline_metrics: list[float],
    concentration_metrics: list[float],
    config: EstimatorConfig,
) -> CalibrationStats:
    """Compute phase statistics; the two states must be separable.

    Raises InsufficientSamples when a phase has fewer than min_samples
    updates, InvalidCalibration when the concentration mean does not exceed
    the baseline mean by at least the margin (no separable states measured).
    """
    if len(baseline_metrics) < config.min_samples:
        raise InsufficientSamples("baseline", len(baseline_metrics), config.min_samples)
    if len(concentration_metrics) < config.min_samples:
        raise InsufficientSamples("concentration", len(concentration_metrics), config.min_samples)
    base_mean, base_std = _mean_std(baseline_metrics)
    conc_mean, conc_std = _mean_std(concentration_metrics)
    if conc_mean <= base_mean + config.margin:
        raise InvalidCalibration(
            f"concentration mean {conc_mean:.4f} not above baseline {base_mean:.4f} "
            f"+ margin {config.margin}"
        )
    return CalibrationStats(
        base_mean, base_std, conc_mean, conc_std, (len(baseline_metrics), len(concentration_metrics))
    )


def normalize(metric: float, stats: CalibrationStats) -> float:
    """Two-point linear map: base_mean -> 0, conc_mean -> 1, clamped to [0, 1]."""
    raw = (metric - stats.base_mean) / (stats.conc_mean - stats.base_mean)
    return min(1.0, max(0.0, raw))


class ConcentrationEstimator:
    """Smoothed score state for one session; sequentially updated."""

    def __init__(self, config: EstimatorConfig | None = None, start_t_us: int = 0):
        self.config = config or EstimatorConfig()
        self.score = ConcentrationScore(0.0, start_t_us, self.config.mode)
        # time_avg state: (weight, raw, dt_s) of admitted updates
        self._window: deque[tuple[float, float, float]] = deque()
        self._window_span_s = 0.0

    def set_mode(self, mode: ScoreMode) -> None:
        """Switch smoothing mode mid-session, preserving the current value."""
        if mode is self.config.mode:
            return
        self.config = EstimatorConfig(
            mode=mode,
            avg_window_s=self.config.avg_window_s,
            ema_tau_s=self.config.ema_tau_s,
            margin=self.config.margin,
            min_samples=self.config.min_samples,
        )
        self._window.clear()
        self._window_span_s = 0.0
        self.score = ConcentrationScore(self.score.value, self.score.timestamp_us, mode)

    def update_score(self, raw: float, gate: float, dt_s: float) -> ConcentrationScore:
        """Advance the score toward `raw` at a rate throttled by `gate`."""
        if not 0.0 <= raw <= 1.0:
            raise ValueError(f"raw {raw} outside [0, 1]")
        if not 0.0 <= gate <= 1.0:
            raise ValueError(f"gate {gate} outside [0, 1]")
        if dt_s <= 0:
            raise ValueError("dt_s must be > 0")
        t_us = self.score.timestamp_us + round(dt_s * 1e6)
        if self.config.mode is ScoreMode.LINEAR:
            step = gate * (1.0 - math.exp(-dt_s / self.config.ema_tau_s))
            value = self.score.value + step * (raw - self.score.value)
        elif gate == 0.0:
            value = self.score.value  # freeze: nothing admitted, nothing expires
        else:
            self._window.append((gate, raw, dt_s))
            self._window_span_s += dt_s
            while self._window and self._window_span_s > self.config.avg_window_s:
                old = self._window.popleft()
                self._window_span_s -= old[2]
            num = sum(w * r * d for w, r, d in self._window)
            den = sum(w * d for w, _, d in self._window)
            value = num / den if den > 0 else self.score.value
        self.score = ConcentrationScore(min(1.0, max(0.0, value)), t_us, self.config.mode)
        return self.score
