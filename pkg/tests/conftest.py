"""Shared test helpers, including the independent spectral oracle."""

from __future__ import annotations

import numpy as np
import pytest

from mindpull.dsp import SampleWindow


def dft_periodogram(x, fs: float):
    """One-sided periodogram straight from the DFT definition (no FFT).

    Oracle for the Welch implementation: same density scaling convention
    (integrating over [0, Nyquist] approximates the mean square), but a
    single full-length rectangular-window transform computed via an explicit
    complex-exponential matrix.
    """
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    k = np.arange(n // 2 + 1)
    basis = np.exp(-2j * np.pi * np.outer(k, np.arange(n)) / n)
    spec = basis @ x
    power = (spec.real**2 + spec.imag**2) / (fs * n)
    if n % 2 == 0:
        power[1:-1] *= 2.0
    else:
        power[1:] *= 2.0
    return k * fs / n, power


def band_integral(freqs, power, lo: float, hi: float) -> float:
    """Trapezoidal band integral of a sampled density (oracle-side)."""
    inner = freqs[(freqs > lo) & (freqs < hi)]
    nodes = np.concatenate(([lo], inner, [hi]))
    return float(np.trapezoid(np.interp(nodes, freqs, power), nodes))


def filled_window(values, fs: float = 256.0) -> SampleWindow:
    """SampleWindow holding exactly `values` at the nominal sample spacing."""
    window = SampleWindow(len(values), fs)
    for i, v in enumerate(values):
        window.push(int(round((i + 1) * 1e6 / fs)), float(v))
    return window


def sine(freq_hz: float, fs: float, n: int, amplitude: float = 1.0, phase: float = 0.0):
    t = np.arange(n) / fs
    return amplitude * np.sin(2 * np.pi * freq_hz * t + phase)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
