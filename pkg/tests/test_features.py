"""Tests for the lag product, spectral re-centering, and the 3 features."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modrec.channel import ChannelParams, apply_channel
from modrec.features import (FEATURE_FIELDS, FeatureVector, extract_features,
                             feature_matrix, lag_product, read_features_csv,
                             shift_center, write_features_csv)
from modrec.oracle import time_average_prediction
from modrec.waveform import (SymbolTiming, cpfsk_scheme, cpfsk_symbol_bounds,
                             draw_tones, modulate_cpfsk)

complex_arrays = st.lists(
    st.complex_numbers(max_magnitude=5, allow_nan=False,
                       allow_infinity=False),
    min_size=3, max_size=60).map(np.array)


class TestLagProduct:
    def test_tone_cancels_constant_phase(self):
        k = np.arange(100)
        delta, theta = 0.17, 1.3
        w = lag_product(np.exp(1j * (delta * k + theta)))
        np.testing.assert_allclose(w, np.exp(1j * delta), atol=1e-12)

    def test_constant_real(self):
        w = lag_product(np.full(10, 3.0, dtype=complex))
        np.testing.assert_array_equal(w.real, 9.0)
        np.testing.assert_array_equal(w.imag, 0.0)

    def test_length(self, rng):
        s = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        assert lag_product(s).size == 49

    def test_too_short(self):
        with pytest.raises(ValueError):
            lag_product(np.array([1.0 + 0j]))

    @given(complex_arrays, st.complex_numbers(max_magnitude=3,
                                              allow_nan=False,
                                              allow_infinity=False))
    @settings(max_examples=100, deadline=None)
    def test_scales_by_magnitude_squared(self, s, c):
        w = lag_product(s)
        wc = lag_product(c * s)
        np.testing.assert_allclose(wc, (abs(c) ** 2) * w, atol=1e-9)


class TestShiftCenter:
    def test_zero_is_identity(self, rng):
        s = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        np.testing.assert_array_equal(shift_center(s, 0.0), s)

    def test_tone_to_quarter_band(self):
        s = np.ones(50, dtype=complex)  # tone at 0
        w = lag_product(shift_center(s, np.pi / 2))
        np.testing.assert_allclose(w.imag, 1.0, atol=1e-12)
        np.testing.assert_allclose(w.real, 0.0, atol=1e-12)

    @given(complex_arrays)
    @settings(max_examples=100, deadline=None)
    def test_im_after_quarter_shift_is_re(self, s):
        # Im(w) of the pi/2-centered signal equals Re(w) at center 0.
        w0 = lag_product(s)
        w_shift = lag_product(shift_center(s, np.pi / 2))
        scale = max(1.0, np.abs(w0).max())
        assert np.abs(w_shift.imag - w0.real).max() <= 1e-12 * scale

    def test_rotates_lag_product(self, rng):
        s = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        phi = 0.456
        w0 = lag_product(s)
        w1 = lag_product(shift_center(s, phi))
        np.testing.assert_allclose(w1, w0 * np.exp(1j * phi), atol=1e-12)


class TestExtractFeatures:
    def test_pure_tone(self):
        delta = 0.11
        s = np.exp(1j * (delta * np.arange(400) + 0.7))
        f1, f2, f3 = extract_features(s)
        assert f1 == pytest.approx(np.cos(delta), abs=1e-12)
        assert f2 == pytest.approx(0.0, abs=1e-20)
        assert f3 == pytest.approx(0.0, abs=1e-20)

    def test_noiseless_synchronous_bfsk(self):
        # h=1/2, Ns=6, eps=eps0=0, delta=0: every sampling interval lies
        # inside one symbol, so Re(w[k]) = cos(pi/12) at every k and
        # f1 = cos(pi/12) exactly; the analytic time average agrees.
        t = SymbolTiming(ns=6, eps=0.0, eps0=0.0, k0=0)
        sch = cpfsk_scheme(2, 0.5, t)
        rng = np.random.default_rng(8)
        n_samples = 600
        n_lo, n_hi = cpfsk_symbol_bounds(t, n_samples)
        tones = draw_tones(sch, n_hi - n_lo + 1, rng)
        s = modulate_cpfsk(tones, sch, t, n_samples)
        f1, f2, f3 = extract_features(s)
        assert f1 == pytest.approx(np.cos(np.pi / 12), abs=1e-12)
        predicted = time_average_prediction("mean_im_bfsk", t,
                                            np.pi / 2, n_samples,
                                            scheme=sch)
        assert f1 == pytest.approx(predicted, abs=1e-12)

    def test_invariant_to_block_phases(self, rng):
        s = np.exp(1j * rng.uniform(0, 2 * np.pi, 500))
        base = extract_features(apply_channel(
            s, ChannelParams(1.0, 0.0, 0.0, 0.05, 0, None)))
        moved = extract_features(apply_channel(
            s, ChannelParams(1.0, 2.2, 4.4, 0.05, 0, None)))
        for a, b in zip(base, moved):
            assert a == pytest.approx(b, abs=1e-12)

    def test_scaling_covariance(self, rng):
        s = rng.standard_normal(300) + 1j * rng.standard_normal(300)
        a = 1.7
        f = extract_features(s)
        fa = extract_features(a * s)
        assert fa[0] == pytest.approx(a ** 2 * f[0], rel=1e-12)
        assert fa[1] == pytest.approx(a ** 4 * f[1], rel=1e-12)
        assert fa[2] == pytest.approx(a ** 4 * f[2], rel=1e-12)

    def test_too_short(self):
        with pytest.raises(ValueError):
            extract_features(np.array([1.0 + 0j]))

    def test_length_two_defines_zero_variance(self):
        f1, f2, f3 = extract_features(np.array([1.0 + 0j, 1.0j]))
        assert (f2, f3) == (0.0, 0.0)


class TestCsvRoundTrip:
    def _rows(self):
        return [
            FeatureVector(f1=0.123456789012345678, f2=1e-17, f3=3.5,
                          label=0, modulation="QAM16", snr_db=-5.0,
                          seed=123456789),
            FeatureVector(f1=-1.5, f2=0.0, f3=2.0 / 3.0, label=1,
                          modulation="BFSK", snr_db=10.0,
                          seed=2 ** 63 - 1),
        ]

    def test_round_trip_exact(self, tmp_path):
        path = tmp_path / "features.csv"
        rows = self._rows()
        write_features_csv(path, rows)
        back = read_features_csv(path)
        assert back == rows

    def test_header(self, tmp_path):
        path = tmp_path / "features.csv"
        write_features_csv(path, self._rows())
        header = path.read_text().splitlines()[0]
        assert header == ",".join(FEATURE_FIELDS)
        assert header == "label,modulation,snr_db,seed,f1,f2,f3"

    def test_missing_column_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,modulation\n0,BPSK\n")
        with pytest.raises(ValueError):
            read_features_csv(path)

    def test_feature_matrix(self):
        x, y = feature_matrix(self._rows())
        assert x.shape == (2, 3)
        np.testing.assert_array_equal(y, [0, 1])
        assert x[0, 2] == 3.5
