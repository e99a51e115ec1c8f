"""Block-fading channel with carrier offset, integer delay and AWGN.

The received sequence is

    out[k] = g * clean[k - k0] * exp(j*(delta_prime*k + theta_c)) * alpha * exp(j*psi) + v[k]

for k = k0 .. len(clean)-1, where ``g`` scales a unit-power input to the
requested SNR against unit-variance complex circular noise ``v``.  Fading
magnitude, phases, offset and delay are constant over a realization (block
fading) and are drawn once per realization by :func:`draw_channel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    """Per-realization channel draws.

    ``snr_db`` of ``None`` (or ``+inf``) means a noiseless channel with unit
    gain; ``-inf`` means noise only.
    """

    alpha: float
    psi: float
    theta_c: float
    delta_prime: float
    k0: int
    snr_db: float | None


@dataclass(frozen=True)
class SnrSpec:
    """Signal power over unit noise power, in dB."""

    snr_db: float

    @property
    def linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)


def snr_gain(snr_db: float | None) -> float:
    """Amplitude gain applied to a unit-power signal for the target SNR."""
    if snr_db is None or snr_db == math.inf:
        return 1.0
    return math.sqrt(10.0 ** (snr_db / 10.0))


def draw_channel(rng: np.random.Generator, gamma_prime: float, ns: int,
                 eps: float, snr_db: float | None = None) -> ChannelParams:
    """Draw one realization's channel parameters.

    delta_prime is uniform within pi/20 of the nominal center gamma_prime;
    theta_c and psi are uniform phases; alpha is Rayleigh with E[alpha^2]=1;
    k0 is uniform over {0, ..., ceil(ns+eps)-1}.  Draw order is fixed for
    reproducibility.
    """
    delta_prime = rng.uniform(gamma_prime - np.pi / 20,
                              gamma_prime + np.pi / 20)
    theta_c = rng.uniform(0.0, 2.0 * np.pi)
    psi = rng.uniform(0.0, 2.0 * np.pi)
    alpha = rng.rayleigh(scale=1.0 / np.sqrt(2.0))
    k0 = int(rng.integers(0, math.ceil(ns + eps)))
    return ChannelParams(alpha=float(alpha), psi=float(psi),
                         theta_c=float(theta_c),
                         delta_prime=float(delta_prime), k0=k0,
                         snr_db=snr_db)


def apply_channel(clean, params: ChannelParams,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Impair a clean unit-power sequence; output length shrinks by k0."""
    clean = np.asarray(clean, dtype=complex)
    n = clean.size
    if params.k0 >= n:
        raise ValueError(f"integer delay k0={params.k0} consumes the whole "
                         f"input of length {n}")
    k = np.arange(params.k0, n)
    g = snr_gain(params.snr_db)
    sig = (g * params.alpha) * clean[:n - params.k0] * np.exp(
        1j * (params.delta_prime * k + params.theta_c + params.psi))
    if params.snr_db is None or params.snr_db == math.inf:
        return sig
    if rng is None:
        raise ValueError("a random generator is required to draw noise")
    m = sig.size
    noise = np.sqrt(0.5) * (rng.standard_normal(m)
                            + 1j * rng.standard_normal(m))
    return sig + noise


def measure_snr(signal_part, noise_part) -> float:
    """10*log10 of the mean-power ratio of two equal-length sequences."""
    s = np.asarray(signal_part)
    v = np.asarray(noise_part)
    if s.size == 0 or v.size == 0:
        raise ValueError("cannot measure SNR on empty input")
    if s.size != v.size:
        raise ValueError("signal and noise parts must have the same length")
    return float(10.0 * np.log10(np.mean(np.abs(s) ** 2)
                                 / np.mean(np.abs(v) ** 2)))
