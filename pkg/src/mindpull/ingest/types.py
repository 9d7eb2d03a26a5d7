"""Stream descriptors, raw sample frames, and synthetic source profiles."""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np


class StreamKind(str, enum.Enum):
    EEG = "eeg"
    GAZE = "gaze"


DEFAULT_EEG_RATE_HZ = 256.0
DEFAULT_GAZE_RATE_HZ = 90.0
# Synthetic montage stands in for "frontal electrodes"; all treated equally.
DEFAULT_EEG_LABELS = ("Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8", "AFz")
GAZE_LABELS = ("yaw_deg", "pitch_deg")


@dataclass(frozen=True)
class StreamDescriptor:
    stream_kind: StreamKind
    sample_rate_hz: float
    channel_count: int
    channel_labels: tuple[str, ...]

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        if self.channel_count != len(self.channel_labels):
            raise ValueError(
                f"channel_count {self.channel_count} != {len(self.channel_labels)} labels"
            )
        if self.stream_kind is StreamKind.GAZE and self.channel_count != 2:
            raise ValueError("gaze streams carry exactly (yaw_deg, pitch_deg)")


def default_eeg_descriptor(
    sample_rate_hz: float = DEFAULT_EEG_RATE_HZ,
    channel_labels: tuple[str, ...] = DEFAULT_EEG_LABELS,
) -> StreamDescriptor:
    return StreamDescriptor(
        StreamKind.EEG, sample_rate_hz, len(channel_labels), tuple(channel_labels)
    )


def default_gaze_descriptor(sample_rate_hz: float = DEFAULT_GAZE_RATE_HZ) -> StreamDescriptor:
    return StreamDescriptor(StreamKind.GAZE, sample_rate_hz, 2, GAZE_LABELS)


@dataclass(frozen=True)
class RawFrame:
    """One timestamped multichannel sample (EEG in uV, gaze in degrees)."""

    stream_kind: StreamKind
    timestamp_us: int
    values: tuple[float, ...]

    def __post_init__(self):
        if self.timestamp_us < 0:
            raise ValueError("timestamp_us must be non-negative")


# ---- synthetic profiles --------------------------------------------------


@dataclass(frozen=True)
class PiecewiseLinear:
    """Piecewise-linear schedule over time; clamps to the end values outside."""

    breakpoints: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.breakpoints:
            raise ValueError("need at least one breakpoint")
        times = [t for t, _ in self.breakpoints]
        if any(nxt <= prev for prev, nxt in zip(times, times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")

    def __call__(self, t_s: float) -> float:
        times = [t for t, _ in self.breakpoints]
        vals = [v for _, v in self.breakpoints]
        return float(np.interp(t_s, times, vals))

    @classmethod
    def constant(cls, value: float) -> "PiecewiseLinear":
        return cls(((0.0, value),))


@dataclass(frozen=True)
class GazeScript:
    """Piecewise-constant (yaw_deg, pitch_deg) over time."""

    breakpoints: tuple[tuple[float, float, float], ...] = ((0.0, 0.0, 0.0),)

    def __post_init__(self):
        times = [t for t, _, _ in self.breakpoints]
        if not times or any(nxt <= prev for prev, nxt in zip(times, times[1:])):
            raise ValueError("breakpoint times must be strictly increasing")

    def __call__(self, t_s: float) -> tuple[float, float]:
        times = [t for t, _, _ in self.breakpoints]
        i = max(0, bisect_right(times, t_s) - 1)
        _, yaw, pitch = self.breakpoints[i]
        return yaw, pitch


@dataclass(frozen=True)
class ToneComponent:
    frequency_hz: float
    amplitude_uv: PiecewiseLinear

    def __post_init__(self):
        if self.frequency_hz <= 0:
            raise ValueError("frequency_hz must be > 0")
        if any(v < 0 for _, v in self.amplitude_uv.breakpoints):
            raise ValueError("amplitude schedule must be non-negative everywhere")


@dataclass(frozen=True)
class SyntheticProfile:
    """Scripted stand-in for the player plus headset.

    EEG channel value at time t is the sum of the tone components evaluated at
    t plus zero-mean uniform noise in [-noise_amplitude_uv, +noise_amplitude_uv];
    gaze follows the piecewise-constant script. Deterministic for a given seed.
    """

    components: tuple[ToneComponent, ...] = ()
    noise_amplitude_uv: float = 0.0
    gaze_script: GazeScript = field(default_factory=GazeScript)
    seed: int = 0

    def __post_init__(self):
        if self.noise_amplitude_uv < 0:
            raise ValueError("noise_amplitude_uv must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be an unsigned integer")
