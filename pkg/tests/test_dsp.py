"""Spectral estimation against an independent explicit-DFT oracle."""

import numpy as np
import pytest

from conftest import band_integral, dft_periodogram, filled_window, sine
from mindpull.dsp import (
    BandPower,
    SampleWindow,
    band_power,
    push_sample,
    relative_alpha,
    welch_psd,
)
from mindpull.errors import BadBand, BadSegmentLength, TimestampRegression, WindowNotFull

FS = 256.0
N = 512  # 2 s window


class TestSampleWindow:
    def test_ready_flag_transitions_at_capacity(self):
        window = SampleWindow(4, FS)
        flags = [push_sample(window, t, 0.0) for t in (1, 2, 3, 4, 5)]
        assert flags == [False, False, False, True, True]

    def test_equal_timestamp_rejected(self):
        window = SampleWindow(4, FS)
        window.push(10, 1.0)
        with pytest.raises(TimestampRegression):
            window.push(10, 2.0)

    def test_ring_keeps_last_capacity_values(self):
        window = SampleWindow(3, FS)
        for t in range(1, 8):
            window.push(t, float(t))
        assert list(window.values()) == [5.0, 6.0, 7.0]


class TestWelch:
    def test_zero_signal_all_zero_power(self):
        spec = welch_psd(filled_window(np.zeros(N), FS), 256, 0.5)
        assert np.all(spec.power == 0.0)
        assert spec.resolution_hz == 1.0

    def test_sine_total_power_matches_mean_square(self):
        x = sine(10.0, FS, N)
        spec = welch_psd(filled_window(x, FS), 256, 0.5)
        total = band_integral(spec.frequencies_hz, spec.power, 0.0, FS / 2)
        # analytic mean square of a unit sine is 0.5
        assert total == pytest.approx(0.5, rel=0.05)
        # oracle: explicit-DFT periodogram of the full window agrees
        freqs, p = dft_periodogram(x, FS)
        assert band_integral(freqs, p, 0.0, FS / 2) == pytest.approx(0.5, rel=0.05)
        assert total == pytest.approx(band_integral(freqs, p, 0.0, FS / 2), rel=0.05)

    def test_sine_power_concentrated_near_peak(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 256, 0.5)
        near = band_power(spec, 8.0, 12.0).power
        total = band_integral(spec.frequencies_hz, spec.power, 0.0, FS / 2)
        assert near >= 0.95 * total

    def test_white_noise_integral_matches_variance(self, rng):
        x = rng.uniform(-1.0, 1.0, N)
        spec = welch_psd(filled_window(x, FS), 256, 0.5)
        total = band_integral(spec.frequencies_hz, spec.power, 0.0, FS / 2)
        assert total == pytest.approx(float(np.var(x)), rel=0.15)

    def test_white_noise_roughly_flat(self, rng):
        x = rng.uniform(-1.0, 1.0, 4096)
        spec = welch_psd(filled_window(x, FS), 256, 0.5)
        low = band_power(spec, 10.0, 60.0).power
        high = band_power(spec, 70.0, 120.0).power
        assert 0.5 <= low / high <= 2.0

    def test_window_not_full(self):
        window = SampleWindow(N, FS)
        window.push(1, 0.0)
        with pytest.raises(WindowNotFull):
            welch_psd(window, 256, 0.5)

    @pytest.mark.parametrize("seg", [0, 1, 3, 100, 1024])
    def test_bad_segment_length(self, seg):
        with pytest.raises(BadSegmentLength):
            welch_psd(filled_window(np.zeros(N), FS), seg, 0.5)

    def test_bad_overlap(self):
        with pytest.raises(ValueError):
            welch_psd(filled_window(np.zeros(N), FS), 256, 1.0)

    def test_single_segment_welch(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 512, 0.0)
        total = band_integral(spec.frequencies_hz, spec.power, 0.0, FS / 2)
        assert total == pytest.approx(0.5, rel=0.05)

    def test_scale_equivariance(self):
        x = sine(10.0, FS, N) + 0.3 * sine(37.0, FS, N)
        base = welch_psd(filled_window(x, FS), 256, 0.5)
        scaled = welch_psd(filled_window(3.7 * x, FS), 256, 0.5)
        nonzero = base.power > 1e-18
        ratio_err = np.abs(scaled.power[nonzero] / (3.7**2 * base.power[nonzero]) - 1.0)
        assert ratio_err.max() < 1e-9
        assert relative_alpha(scaled) == pytest.approx(relative_alpha(base), abs=1e-9)


class TestBandPower:
    def test_full_band_equals_total(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 256, 0.5)
        full = band_power(spec, 0.0, FS / 2).power
        total = band_integral(spec.frequencies_hz, spec.power, 0.0, FS / 2)
        assert full == pytest.approx(total, rel=1e-12)

    def test_additive_over_adjacent_bands(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N) + sine(33.0, FS, N), FS), 256, 0.5)
        whole = band_power(spec, 4.0, 60.0).power
        parts = band_power(spec, 4.0, 21.0).power + band_power(spec, 21.0, 60.0).power
        assert parts == pytest.approx(whole, rel=1e-12)

    def test_edges_between_bins_interpolated(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 256, 0.5)
        a = band_power(spec, 8.25, 12.75).power
        b = band_power(spec, 8.0, 13.0).power
        assert 0.0 < a <= b

    def test_alpha_vs_broadband_for_alpha_tone(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 256, 0.5)
        assert band_power(spec, 8, 13).power >= 0.95 * band_power(spec, 1, 40).power

    def test_alpha_vs_broadband_for_beta_tone(self):
        spec = welch_psd(filled_window(sine(20.0, FS, N), FS), 256, 0.5)
        assert band_power(spec, 8, 13).power <= 0.05 * band_power(spec, 1, 40).power

    @pytest.mark.parametrize("lo,hi", [(-1.0, 10.0), (10.0, 10.0), (13.0, 8.0), (0.0, 200.0)])
    def test_bad_band(self, lo, hi):
        spec = welch_psd(filled_window(np.zeros(N), FS), 256, 0.5)
        with pytest.raises(BadBand):
            band_power(spec, lo, hi)

    def test_band_power_type(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 256, 0.5)
        bp = band_power(spec, 8.0, 13.0)
        assert isinstance(bp, BandPower)
        assert (bp.lo_hz, bp.hi_hz) == (8.0, 13.0)
        assert bp.power >= 0.0


class TestRelativeAlpha:
    def test_zero_signal_is_zero(self):
        spec = welch_psd(filled_window(np.zeros(N), FS), 256, 0.5)
        assert relative_alpha(spec) == 0.0

    def test_pure_alpha_tone_near_one(self):
        spec = welch_psd(filled_window(sine(10.0, FS, N), FS), 256, 0.5)
        assert relative_alpha(spec) >= 0.95

    def test_equal_alpha_beta_mix_near_half(self):
        x = sine(10.0, FS, N) + sine(20.0, FS, N)
        spec = welch_psd(filled_window(x, FS), 256, 0.5)
        assert relative_alpha(spec) == pytest.approx(0.5, abs=0.1)
        # oracle agreement on the ratio itself
        freqs, p = dft_periodogram(x, FS)
        oracle = band_integral(freqs, p, 8, 13) / band_integral(freqs, p, 1, 40)
        assert relative_alpha(spec) == pytest.approx(oracle, abs=0.05)

    def test_off_bin_alpha_tone(self):
        spec = welch_psd(filled_window(sine(10.3, FS, N), FS), 256, 0.5)
        assert relative_alpha(spec) >= 0.95

    @pytest.mark.parametrize("freq", [2.0, 6.0, 9.0, 11.5, 25.0, 39.0])
    def test_always_in_unit_interval(self, freq, rng):
        x = sine(freq, FS, N) + 0.2 * rng.uniform(-1, 1, N)
        spec = welch_psd(filled_window(x, FS), 256, 0.5)
        assert 0.0 <= relative_alpha(spec) <= 1.0
