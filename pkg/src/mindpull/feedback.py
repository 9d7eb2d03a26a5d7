"""Score-to-stimulus mapping: every stimulus shrinks as concentration rises.

All maps are continuous and monotone non-increasing in the score, pulling
the player's visual, auditory, and tactile field inward: the view narrows
and slows, ambient audio quiets and slows, the grip vibration contracts to
the center of the handle, and the hold-back traction releases. Endpoint
values are configuration, not constants of nature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadConfig


@dataclass(frozen=True)
class FeedbackConfig:
    fov_min: float = 0.4  # fraction of full field of view at score 1
    time_scale_min: float = 0.25  # environment playback rate at score 1
    audio_gain_min: float = 0.1
    audio_rate_min: float = 0.5
    vibe_min: float = 0.1  # amplitude of the surviving center vibrator
    traction_max_n: float = 40.0  # hold-back force at score 0
    traction_min_n: float = 5.0
    vibrator_count: int = 5  # odd, laid out along the grip
    gamma: float = 1.0  # perceptual shaping exponent for visual/audio

    def __post_init__(self):
        for name in ("fov_min", "time_scale_min", "audio_gain_min", "audio_rate_min", "vibe_min"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise BadConfig(name, f"{v} outside [0, 1]")
        if self.traction_min_n < 0 or self.traction_max_n < self.traction_min_n:
            raise BadConfig("traction", "need 0 <= traction_min_n <= traction_max_n")
        if self.vibrator_count < 1 or self.vibrator_count % 2 == 0:
            raise BadConfig("vibrator_count", "must be a positive odd integer")
        if self.gamma <= 0:
            raise BadConfig("gamma", "must be > 0")


@dataclass(frozen=True)
class FeedbackCommand:
    fov_scale: float
    time_scale: float
    audio_gain: float
    audio_rate: float
    vibe_amplitudes: tuple[float, ...]
    traction_n: float
    wind_on: bool

    def to_obj(self) -> dict:
        return {
            "fov_scale": self.fov_scale,
            "time_scale": self.time_scale,
            "audio_gain": self.audio_gain,
            "audio_rate": self.audio_rate,
            "vibe_amplitudes": list(self.vibe_amplitudes),
            "traction_n": self.traction_n,
            "wind_on": self.wind_on,
        }


def _lerp_down(fraction: float, at_zero: float, at_one: float) -> float:
    """Linear from at_zero to at_one, bit-exact at both endpoints."""
    if fraction <= 0.0:
        return at_zero
    if fraction >= 1.0:
        return at_one
    return at_zero - fraction * (at_zero - at_one)


def map_visual(score: float, config: FeedbackConfig) -> tuple[float, float]:
    """(fov_scale, time_scale): full and real-time at 0, narrow and slow at 1."""
    _check_score(score)
    shaped = score**config.gamma
    return _lerp_down(shaped, 1.0, config.fov_min), _lerp_down(shaped, 1.0, config.time_scale_min)


def map_audio(score: float, config: FeedbackConfig) -> tuple[float, float]:
    """(audio_gain, audio_rate): ambient sound fades and slows with the score."""
    _check_score(score)
    shaped = score**config.gamma
    return _lerp_down(shaped, 1.0, config.audio_gain_min), _lerp_down(
        shaped, 1.0, config.audio_rate_min
    )


def map_haptic(score: float, config: FeedbackConfig) -> tuple[tuple[float, ...], float]:
    """Grip vibration contracts toward the center; traction releases linearly.

    Active half-width w = ceil((1-score) * (N-1)/2): the vibrators within w
    of the center run at 1 - score*(1 - vibe_min), the rest are off. The
    pattern is a palindrome by construction.
    """
    _check_score(score)
    n = config.vibrator_count
    center = (n - 1) // 2
    half_width = math.ceil((1.0 - score) * (n - 1) / 2)
    amplitude = _lerp_down(score, 1.0, config.vibe_min)
    amps = tuple(amplitude if abs(i - center) <= half_width else 0.0 for i in range(n))
    traction = _lerp_down(score, config.traction_max_n, config.traction_min_n)
    return amps, traction


def compose(score: float, wind_on: bool, config: FeedbackConfig) -> FeedbackCommand:
    """Full multimodal command for one tick; pure function of its inputs."""
    fov, ts = map_visual(score, config)
    gain, rate = map_audio(score, config)
    amps, traction = map_haptic(score, config)
    return FeedbackCommand(fov, ts, gain, rate, amps, traction, wind_on)


def _check_score(score: float) -> None:
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"score {score} outside [0, 1]")
