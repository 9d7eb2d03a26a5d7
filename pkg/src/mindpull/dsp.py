"""Sliding sample windows, Welch power spectra, and band powers.

The spectral contract: a PowerSpectrum is a one-sided density in uV^2/Hz,
scaled so that integrating it over [0, Nyquist] approximates the mean square
of the (mean-removed) signal. Band powers are trapezoidal integrals of that
density, with linear interpolation where a band edge falls between bins.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import BadBand, BadSegmentLength, TimestampRegression, WindowNotFull

ALPHA_BAND_HZ = (8.0, 13.0)
BROADBAND_HZ = (1.0, 40.0)


@dataclass(frozen=True)
class PowerSpectrum:
    frequencies_hz: np.ndarray  # uniform grid, 0 .. sample_rate/2
    power: np.ndarray  # uV^2/Hz, all >= 0
    resolution_hz: float


@dataclass(frozen=True)
class BandPower:
    lo_hz: float
    hi_hz: float
    power: float  # uV^2


class SampleWindow:
    """Ring of the most recent `capacity` samples of one channel."""

    def __init__(self, capacity: int, sample_rate_hz: float):
        if capacity <= 0:
            raise ValueError("capacity must be > 0")
        if sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be > 0")
        self.capacity = capacity
        self.sample_rate_hz = sample_rate_hz
        self._t = deque(maxlen=capacity)
        self._v = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._v)

    @property
    def is_full(self) -> bool:
        return len(self._v) >= self.capacity

    def push(self, t_us: int, value: float) -> bool:
        """Store one sample, evicting the oldest when full; True once full."""
        if self._t and t_us <= self._t[-1]:
            raise TimestampRegression(f"t={t_us} after t={self._t[-1]}")
        self._t.append(t_us)
        self._v.append(float(value))
        return self.is_full

    def values(self) -> np.ndarray:
        return np.asarray(self._v, dtype=np.float64)

    def timestamps_us(self) -> list[int]:
        return list(self._t)


def push_sample(window: SampleWindow, t_us: int, value: float) -> bool:
    return window.push(t_us, value)


def _hann_periodic(n: int) -> np.ndarray:
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def welch_psd(
    window: SampleWindow,
    segment_len: int,
    overlap_fraction: float = 0.5,
    taper: str = "hann",
) -> PowerSpectrum:
    """Average of tapered, overlapped, mean-removed segment periodograms.

    segment_len must be a power of two no larger than the window capacity.
    The DC bin is zeroed: the mean is removed per segment, so bin 0 carries
    only taper leakage and is excluded from every band integral.
    """
    if taper != "hann":
        raise ValueError(f"unsupported taper {taper!r}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise ValueError("overlap_fraction must be in [0, 1)")
    if not window.is_full:
        raise WindowNotFull(f"{len(window)}/{window.capacity} samples")
    if segment_len < 2 or segment_len & (segment_len - 1):
        raise BadSegmentLength(f"{segment_len} is not a power of two >= 2")
    if segment_len > window.capacity:
        raise BadSegmentLength(f"{segment_len} exceeds window capacity {window.capacity}")

    x = window.values()
    fs = window.sample_rate_hz
    hop = max(1, int(segment_len * (1.0 - overlap_fraction)))
    taper_w = _hann_periodic(segment_len)
    norm = fs * float(np.sum(taper_w**2))

    acc = np.zeros(segment_len // 2 + 1)
    count = 0
    for start in range(0, len(x) - segment_len + 1, hop):
        seg = x[start : start + segment_len]
        seg = seg - seg.mean()
        spec = np.fft.rfft(seg * taper_w)
        p = (spec.real**2 + spec.imag**2) / norm
        p[1:-1] *= 2.0  # one-sided: fold negative frequencies (not DC/Nyquist)
        acc += p
        count += 1

    power = acc / count
    power[0] = 0.0
    freqs = np.arange(segment_len // 2 + 1) * (fs / segment_len)
    return PowerSpectrum(freqs, power, fs / segment_len)


def band_power(spectrum: PowerSpectrum, lo_hz: float, hi_hz: float) -> BandPower:
    """Trapezoidal integral of the density over [lo_hz, hi_hz] in uV^2."""
    f = spectrum.frequencies_hz
    if not 0.0 <= lo_hz < hi_hz <= f[-1]:
        raise BadBand(f"[{lo_hz}, {hi_hz}] outside [0, {f[-1]}]")
    inner = f[(f > lo_hz) & (f < hi_hz)]
    nodes = np.concatenate(([lo_hz], inner, [hi_hz]))
    density = np.interp(nodes, f, spectrum.power)
    return BandPower(lo_hz, hi_hz, float(np.trapezoid(density, nodes)))


def relative_alpha(
    spectrum: PowerSpectrum,
    alpha_band: tuple[float, float] = ALPHA_BAND_HZ,
    broadband: tuple[float, float] = BROADBAND_HZ,
) -> float:
    """Alpha-band share of broadband power, in [0, 1]; 0 when broadband is 0.

    The ratio is invariant to any common rescaling of the input signal,
    which is what makes it usable across electrode gains and sessions.
    """
    total = band_power(spectrum, *broadband).power
    if total <= 0.0:
        return 0.0
    alpha = band_power(spectrum, *alpha_band).power
    return min(1.0, max(0.0, alpha / total))
