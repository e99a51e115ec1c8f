"""Tests for the block-fading + offset + AWGN channel."""

import math

import numpy as np
import pytest

from modrec.channel import (ChannelParams, SnrSpec, apply_channel,
                            draw_channel, measure_snr, snr_gain)
from modrec.features import lag_product


def _params(alpha=1.0, psi=0.0, theta_c=0.0, delta_prime=0.0, k0=0,
            snr_db=None):
    return ChannelParams(alpha=alpha, psi=psi, theta_c=theta_c,
                         delta_prime=delta_prime, k0=k0, snr_db=snr_db)


class TestDrawChannel:
    def test_rayleigh_unit_mean_square(self):
        rng = np.random.default_rng(0)
        alphas = np.array([draw_channel(rng, 0.0, 6, 0.0).alpha
                           for _ in range(10 ** 5)])
        # E[alpha^2] = 1; with 1e5 draws the tolerance is ~10 sigma at 0.01
        assert np.mean(alphas ** 2) == pytest.approx(1.0, abs=0.01)

    def test_offset_range(self):
        rng = np.random.default_rng(1)
        for gamma in (0.0, np.pi / 2):
            deltas = [draw_channel(rng, gamma, 6, 0.5).delta_prime
                      for _ in range(2000)]
            assert min(deltas) >= gamma - np.pi / 20
            assert max(deltas) <= gamma + np.pi / 20

    def test_k0_range(self):
        rng = np.random.default_rng(2)
        k0s = {draw_channel(rng, 0.0, 6, 0.3).k0 for _ in range(2000)}
        assert k0s == set(range(7))  # ceil(6.3) = 7 values
        k0s = {draw_channel(rng, 0.0, 6, 0.0).k0 for _ in range(2000)}
        assert k0s == set(range(6))

    def test_phase_ranges(self):
        rng = np.random.default_rng(3)
        params = [draw_channel(rng, 0.0, 6, 0.0) for _ in range(500)]
        assert all(0 <= p.theta_c < 2 * np.pi for p in params)
        assert all(0 <= p.psi < 2 * np.pi for p in params)

    def test_deterministic(self):
        a = draw_channel(np.random.default_rng(42), 0.0, 6, 0.2, snr_db=5.0)
        b = draw_channel(np.random.default_rng(42), 0.0, 6, 0.2, snr_db=5.0)
        assert a == b


class TestApplyChannel:
    def test_identity_channel(self, rng):
        clean = np.exp(1j * rng.uniform(0, 2 * np.pi, 500))
        out = apply_channel(clean, _params(snr_db=None))
        np.testing.assert_array_equal(out, clean)
        out_inf = apply_channel(clean, _params(snr_db=math.inf), rng)
        np.testing.assert_array_equal(out_inf, clean)

    def test_noise_only_unit_variance(self, rng):
        clean = np.ones(10 ** 5, dtype=complex)
        out = apply_channel(clean, _params(snr_db=-math.inf), rng)
        assert np.mean(np.abs(out) ** 2) == pytest.approx(1.0, abs=0.02)

    def test_awgn_circularity(self, rng):
        out = apply_channel(np.zeros(10 ** 5, complex) + 0j,
                            _params(snr_db=-math.inf), rng)
        assert out.real.var() == pytest.approx(0.5, abs=0.01)
        assert out.imag.var() == pytest.approx(0.5, abs=0.01)
        corr = np.corrcoef(out.real, out.imag)[0, 1]
        assert abs(corr) < 0.01

    def test_snr_scaling_on_tone(self, rng):
        # unit-power tone at 5 dB: signal-part power ~ 10^0.5.
        n = 10 ** 5
        clean = np.exp(1j * 0.3 * np.arange(n))
        out = apply_channel(clean, _params(snr_db=5.0), rng)
        signal_power = np.mean(np.abs(out) ** 2) - 1.0  # noise power is 1
        assert signal_power == pytest.approx(10 ** 0.5, rel=0.02)

    def test_delay_shift_and_length(self):
        clean = np.arange(10, dtype=complex)
        out = apply_channel(clean, _params(k0=3))
        assert out.size == 7
        np.testing.assert_array_equal(out, clean[:7])

    def test_delay_with_offset_uses_absolute_index(self):
        clean = np.ones(8, dtype=complex)
        delta = 0.11
        out = apply_channel(clean, _params(delta_prime=delta, k0=2))
        expected = np.exp(1j * delta * np.arange(2, 8))
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_k0_too_large(self):
        with pytest.raises(ValueError):
            apply_channel(np.ones(5, complex), _params(k0=5))

    def test_noise_requires_rng(self):
        with pytest.raises(ValueError):
            apply_channel(np.ones(5, complex), _params(snr_db=0.0))

    def test_lag_product_cancels_block_phases(self, rng):
        clean = np.exp(1j * rng.uniform(0, 2 * np.pi, 300))
        base = lag_product(apply_channel(clean, _params()))
        rotated = lag_product(apply_channel(
            clean, _params(psi=1.234, theta_c=5.4321)))
        np.testing.assert_allclose(rotated, base, atol=1e-12)
        scaled = lag_product(apply_channel(clean, _params(alpha=2.0)))
        np.testing.assert_allclose(scaled, 4.0 * base, rtol=1e-12)


class TestMeasureSnr:
    def test_equal_power_is_zero_db(self):
        s = np.ones(2000, complex)
        assert measure_snr(s, s) == pytest.approx(0.0, abs=1e-12)

    def test_ten_db(self, rng):
        noise = np.sqrt(0.5) * (rng.standard_normal(10 ** 5)
                                + 1j * rng.standard_normal(10 ** 5))
        signal = np.sqrt(10) * np.exp(1j * 0.1 * np.arange(10 ** 5))
        assert measure_snr(signal, noise) == pytest.approx(10.0, abs=0.1)

    def test_end_to_end_consistency(self, rng):
        n = 10 ** 5
        clean = np.exp(1j * 0.25 * np.arange(n))
        params = _params(snr_db=5.0)
        sig = apply_channel(clean, _params(snr_db=None))
        noisy = apply_channel(clean, params, rng)
        assert measure_snr(snr_gain(5.0) * sig, noisy - snr_gain(5.0) * sig
                           ) == pytest.approx(5.0, abs=0.2)

    def test_errors(self):
        with pytest.raises(ValueError):
            measure_snr(np.array([]), np.array([]))
        with pytest.raises(ValueError):
            measure_snr(np.ones(4), np.ones(5))


def test_snr_spec_linear():
    assert SnrSpec(10.0).linear == pytest.approx(10.0)
    assert SnrSpec(-3.0).linear == pytest.approx(10 ** -0.3)
    assert snr_gain(20.0) == pytest.approx(10.0)
