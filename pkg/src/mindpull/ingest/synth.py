"""Deterministic synthetic EEG/gaze frame generation from scripted profiles."""

from __future__ import annotations

import math

import numpy as np

from ..errors import EmptyProfile
from .types import RawFrame, StreamDescriptor, StreamKind, SyntheticProfile


def frame_timestamps_us(sample_rate_hz: float, duration_s: float) -> list[int]:
    """Timestamps i * 1e6 / rate rounded to the nearest microsecond."""
    n = int(math.floor(sample_rate_hz * duration_s))
    return [int(round(i * 1_000_000 / sample_rate_hz)) for i in range(n)]


def synth_generate(
    profile: SyntheticProfile, desc: StreamDescriptor, duration_s: float
) -> list[RawFrame]:
    """Generate floor(rate * duration) frames for one stream of `desc`.

    EEG: every channel carries the same scripted tone sum; noise is drawn
    per channel per sample from a generator seeded with profile.seed, so
    identical calls produce identical frames.
    """
    if duration_s <= 0:
        raise ValueError("duration_s must be > 0")
    stamps = frame_timestamps_us(desc.sample_rate_hz, duration_s)
    if desc.stream_kind is StreamKind.GAZE:
        return [
            RawFrame(StreamKind.GAZE, t_us, profile.gaze_script(t_us / 1e6)) for t_us in stamps
        ]

    if not profile.components and profile.noise_amplitude_uv == 0:
        raise EmptyProfile("EEG profile has no tone components and no noise")
    rng = np.random.default_rng(profile.seed)
    frames = []
    for t_us in stamps:
        t = t_us / 1e6
        signal = sum(
            c.amplitude_uv(t) * math.sin(2 * math.pi * c.frequency_hz * t)
            for c in profile.components
        )
        if profile.noise_amplitude_uv > 0:
            noise = rng.uniform(
                -profile.noise_amplitude_uv, profile.noise_amplitude_uv, desc.channel_count
            )
            values = tuple(signal + n for n in noise)
        else:
            values = (signal,) * desc.channel_count
        frames.append(RawFrame(StreamKind.EEG, t_us, values))
    return frames


def merge_streams(*streams: list[RawFrame]) -> list[RawFrame]:
    """Interleave frames from several streams in timestamp order (stable)."""
    merged = []
    for i, stream in enumerate(streams):
        merged.extend((f.timestamp_us, i, j, f) for j, f in enumerate(stream))
    merged.sort(key=lambda item: item[:3])
    return [f for _, _, _, f in merged]
