"""Closed-form moments of Im(w[k]) for noiseless, fading-free signals.

For a received sample index k (the delayed stream, so the symbol grid sits
at t0 = k0 + eps0 sampling periods), define

    P_n[k]  = p(k - t0 - n*period)        (times in sampling periods)
    P_n-[k] = p(k - 1 - t0 - n*period)

For linear modulations the mean of Im(w[k]) is sin(delta') * sum_n P_n P_n-
times E[a^2]; the variance has separate closed forms for BPSK and for the
pi/2-rotation-invariant constellations.  For binary CPFSK the mean and
variance follow from the per-symbol frequency-pulse integrals Q_m[k].
These formulas are independent checks on the synthesis + feature pipeline:
:func:`run_oracle_checks` compares them against Monte-Carlo statistics of
the generated signals at matched k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, apply_channel
from .features import lag_product
from .waveform import (CpfskScheme, LinearScheme, RrcPulse, SymbolTiming,
                       cpfsk_scheme, cpfsk_symbol_bounds, draw_symbols,
                       draw_tones, linear_scheme, linear_symbol_bounds,
                       modulate_cpfsk, modulate_linear, rrc_eval)

# Negative analytic variances beyond this are treated as formula violations.
_VAR_CLAMP = 1e-9

MEAN_QUANTITIES = ("mean_im_linear", "mean_im_bfsk")
VAR_QUANTITIES = ("var_im_bpsk", "var_im_qampsk", "var_im_bfsk")


@dataclass(frozen=True)
class ConstellationMoments:
    """Even amplitude moments E[a^2], E[a^4] of a constellation."""

    m2: float
    m4: float


@dataclass(frozen=True)
class PulseCorrSums:
    """The four pulse-correlation sums at one sample index.

    s_pp = sum_n P_n P_n-, s_p2 = sum_n P_n^2, s_pm2 = sum_n (P_n-)^2,
    s_sq = sum_n (P_n P_n-)^2.
    """

    s_pp: float
    s_p2: float
    s_pm2: float
    s_sq: float


def constellation_moments(scheme: LinearScheme) -> ConstellationMoments:
    """Exact moments by enumeration over equiprobable points."""
    a2 = np.abs(scheme.constellation) ** 2
    return ConstellationMoments(m2=float(a2.mean()),
                                m4=float((a2 ** 2).mean()))


def _pulse_windows(pulse: RrcPulse, timing: SymbolTiming, ks: np.ndarray,
                   n_bounds: tuple[int, int] | None = None):
    """P_n and P_n- arrays over all contributing n, for each k in ks."""
    span = pulse.span_symbols
    t0 = timing.t0
    u = (ks - t0) / timing.period
    um = (ks - 1 - t0) / timing.period
    base = np.floor(u).astype(np.int64)
    window = np.arange(-span - 1, span + 1)
    n = base[:, None] + window[None, :]
    p = rrc_eval(u[:, None] - n, pulse)
    pm = rrc_eval(um[:, None] - n, pulse)
    if n_bounds is not None:
        outside = (n < n_bounds[0]) | (n > n_bounds[1])
        p[outside] = 0.0
        pm[outside] = 0.0
    return p, pm


def pulse_corr_sums_array(pulse: RrcPulse, timing: SymbolTiming, ks,
                          n_bounds: tuple[int, int] | None = None
                          ) -> tuple[np.ndarray, ...]:
    """(s_pp, s_p2, s_pm2, s_sq) arrays over the sample indices ks."""
    ks = np.asarray(ks, dtype=float)
    p, pm = _pulse_windows(pulse, timing, ks, n_bounds)
    ppm = p * pm
    return (ppm.sum(axis=1), (p ** 2).sum(axis=1),
            (pm ** 2).sum(axis=1), (ppm ** 2).sum(axis=1))


def pulse_corr_sums(pulse: RrcPulse, timing: SymbolTiming, k: int,
                    n_bounds: tuple[int, int] | None = None
                    ) -> PulseCorrSums:
    """The four sums at sample index k.

    ``n_bounds`` optionally restricts the symbol indices to a finite signal
    support (inclusive); by default the signal extends over all n.
    """
    s_pp, s_p2, s_pm2, s_sq = pulse_corr_sums_array(pulse, timing, [k],
                                                    n_bounds)
    return PulseCorrSums(s_pp=float(s_pp[0]), s_p2=float(s_p2[0]),
                         s_pm2=float(s_pm2[0]), s_sq=float(s_sq[0]))


def mean_im_linear(delta_prime: float, sums: PulseCorrSums,
                   moments: ConstellationMoments) -> float:
    return float(np.sin(delta_prime) * sums.s_pp * moments.m2)


def _finish_variance(value: float, formula: str) -> float:
    if value < -_VAR_CLAMP:
        raise ValueError(f"{formula} produced a negative variance {value!r}")
    return max(value, 0.0)


def var_im_bpsk(delta_prime: float, sums: PulseCorrSums) -> float:
    value = np.sin(delta_prime) ** 2 * (
        sums.s_pp ** 2 + sums.s_p2 * sums.s_pm2 - 2.0 * sums.s_sq)
    return _finish_variance(float(value), "var_im_bpsk")


def var_im_qampsk(delta_prime: float, sums: PulseCorrSums,
                  moments: ConstellationMoments) -> float:
    m2, m4 = moments.m2, moments.m4
    value = (np.sin(delta_prime) ** 2
             * ((m4 - 2.0 * m2 ** 2) * sums.s_sq + m2 ** 2 * sums.s_pp ** 2)
             + 0.5 * m2 ** 2 * (sums.s_p2 * sums.s_pm2 - sums.s_pp ** 2))
    return _finish_variance(float(value), "var_im_qampsk")


def q_integral(m: int, k: int, timing: SymbolTiming,
               tone_increment: float) -> float:
    """Frequency-pulse integral of symbol m over the interval (k-1, k]."""
    t0 = timing.t0
    lo = max(k - 1 - t0, m * timing.period)
    hi = min(k - t0, (m + 1) * timing.period)
    return tone_increment * max(0.0, hi - lo)


def q_profile(k: int, timing: SymbolTiming,
              tone_increment: float) -> np.ndarray:
    """All nonzero Q_m[k], i.e. for the symbols overlapping (k-1, k]."""
    t0 = timing.t0
    m_first = int(np.floor((k - 1 - t0) / timing.period))
    m_last = int(np.floor((k - t0) / timing.period))
    qs = [q_integral(m, k, timing, tone_increment)
          for m in range(m_first, m_last + 1)]
    return np.asarray(qs)


def mean_im_bfsk(delta_prime: float, q) -> float:
    q = np.asarray(q, dtype=float)
    return float(np.sin(delta_prime) * np.prod(np.cos(q)))


def var_im_bfsk(delta_prime: float, q) -> float:
    q = np.asarray(q, dtype=float)
    prod_cos2q = np.prod(np.cos(2.0 * q))
    prod_cossq = np.prod(np.cos(q) ** 2)
    value = (0.5 - 0.5 * prod_cos2q
             + np.sin(delta_prime) ** 2 * (prod_cos2q - prod_cossq))
    return _finish_variance(float(value), "var_im_bfsk")


def _w_index_range(timing: SymbolTiming, n_samples: int) -> np.ndarray:
    """Received sample indices at which w[k] exists for one realization."""
    return np.arange(timing.k0 + 1, timing.k0 + n_samples)


def _per_k_mean_var(quantity: str, timing: SymbolTiming, delta_prime: float,
                    ks: np.ndarray, pulse: RrcPulse | None,
                    scheme=None) -> tuple[np.ndarray, np.ndarray | None]:
    if quantity in ("mean_im_linear", "var_im_bpsk", "var_im_qampsk"):
        if pulse is None or scheme is None:
            raise ValueError(f"{quantity} requires a pulse and a linear scheme")
        moments = constellation_moments(scheme)
        s_pp, s_p2, s_pm2, s_sq = pulse_corr_sums_array(pulse, timing, ks)
        means = np.sin(delta_prime) * s_pp * moments.m2
        if quantity == "mean_im_linear":
            return means, None
        if quantity == "var_im_bpsk":
            variances = np.sin(delta_prime) ** 2 * (
                s_pp ** 2 + s_p2 * s_pm2 - 2.0 * s_sq)
        else:
            m2, m4 = moments.m2, moments.m4
            variances = (np.sin(delta_prime) ** 2
                         * ((m4 - 2.0 * m2 ** 2) * s_sq + m2 ** 2 * s_pp ** 2)
                         + 0.5 * m2 ** 2 * (s_p2 * s_pm2 - s_pp ** 2))
        if variances.min() < -_VAR_CLAMP:
            raise ValueError(f"{quantity} produced a negative variance")
        return means, np.maximum(variances, 0.0)

    if quantity in ("mean_im_bfsk", "var_im_bfsk"):
        if not isinstance(scheme, CpfskScheme) or scheme.order != 2:
            raise ValueError(f"{quantity} requires a binary CPFSK scheme")
        beta = float(scheme.tone_offsets[1])
        means = np.empty(ks.size)
        variances = np.empty(ks.size)
        for i, k in enumerate(ks):
            q = q_profile(int(k), timing, beta)
            means[i] = mean_im_bfsk(delta_prime, q)
            variances[i] = var_im_bfsk(delta_prime, q)
        if quantity == "mean_im_bfsk":
            return means, None
        return means, variances

    raise ValueError(f"unknown quantity {quantity!r}")


def time_average_prediction(quantity: str, timing: SymbolTiming,
                            delta_prime: float, n_samples: int,
                            pulse: RrcPulse | None = None,
                            scheme=None) -> float:
    """Bridge the per-k formulas to per-realization sample statistics.

    Mean quantities average the per-k mean over the realization's w indices.
    Variance quantities return the pooled variance over a uniformly drawn
    sample index: E_k[var_k] + Var_k(mean_k) by the law of total variance.

    The per-realization sample mean estimates the mean prediction without
    bias.  A per-realization sample variance estimates the pooled variance
    only up to an O(correlation length / N) term from cross-sample symbol
    correlations; an unbiased Monte-Carlo estimate of the pooled variance
    pools the samples of many realizations instead.
    """
    ks = _w_index_range(timing, n_samples)
    means, variances = _per_k_mean_var(quantity, timing, delta_prime, ks,
                                       pulse, scheme)
    if quantity in MEAN_QUANTITIES:
        return float(means.mean())
    return float(variances.mean() + means.var())


# ---------------------------------------------------------------------------
# Monte-Carlo cross-checks
# ---------------------------------------------------------------------------

ORACLE_REPORT_FIELDS = ("formula", "k", "analytic", "monte_carlo",
                        "std_err", "passed")

_SCHEME_ORDER = ("BPSK", "PSK4", "PSK8", "QAM16", "BFSK")


@dataclass(frozen=True)
class OracleCheckRow:
    formula: str
    k: int
    analytic: float
    monte_carlo: float
    std_err: float
    passed: bool


def _replicate_stats(column: np.ndarray, n_replicates: int,
                     statistic) -> tuple[float, float]:
    """Estimate a statistic and its standard error by replication.

    The column of independent draws is split into ``n_replicates`` groups;
    the estimate is the mean of the per-group statistics and the standard
    error their spread over sqrt(n_replicates).  This stays valid for
    degenerate per-k distributions (e.g. two-point), where moment-based
    variance-of-variance formulas collapse numerically.
    """
    groups = column.reshape(n_replicates, -1)
    values = statistic(groups)
    return (float(values.mean()),
            float(values.std(ddof=1) / np.sqrt(n_replicates)))


def _noiseless_im_w(modulation: str, pulse: RrcPulse, timing: SymbolTiming,
                    delta_prime: float, n_samples: int, n_realizations: int,
                    ks: np.ndarray, h: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Im(w[k]) at the requested ks for many noiseless realizations.

    Runs the real synthesis pipeline: modulator, identity-fading channel
    with carrier offset, lag product.
    """
    params = ChannelParams(alpha=1.0, psi=0.0, theta_c=0.0,
                           delta_prime=delta_prime, k0=timing.k0,
                           snr_db=None)
    out = np.empty((n_realizations, ks.size))
    if modulation == "BFSK":
        scheme = cpfsk_scheme(2, h, timing)
        n_lo, n_hi = cpfsk_symbol_bounds(timing, n_samples + timing.k0)
    else:
        scheme = linear_scheme(modulation)
        n_lo, n_hi = linear_symbol_bounds(pulse, timing,
                                          n_samples + timing.k0)
    need = n_hi - n_lo + 1
    for r in range(n_realizations):
        if modulation == "BFSK":
            tones = draw_tones(scheme, need, rng)
            clean = modulate_cpfsk(tones, scheme, timing,
                                   n_samples + timing.k0)
        else:
            symbols = draw_symbols(scheme, need, rng)
            clean = modulate_linear(symbols, pulse, timing,
                                    n_samples + timing.k0)
        received = apply_channel(clean, params)
        w = lag_product(received)
        # w[i] corresponds to received index k = k0 + 1 + i
        out[r] = w.imag[ks - timing.k0 - 1]
    return out


def run_oracle_checks(n_realizations: int = 4000, n_symbols: int = 34,
                      seed: int = 20260809,
                      deltas=(0.0, np.pi / 20, np.pi / 2),
                      k_values=None, rolloff: float = 0.35,
                      timing: SymbolTiming | None = None, h: float = 0.5,
                      n_replicates: int = 40,
                      flip_bfsk_var_sign: bool = False
                      ) -> list[OracleCheckRow]:
    """Compare every closed form against Monte-Carlo at matched k.

    Each (modulation, delta) cell synthesizes ``n_realizations`` independent
    noiseless, fading-free realizations at a fixed timing and tests the
    per-k mean and variance of Im(w[k]) within 3 standard errors (estimated
    over ``n_replicates`` replicate groups).

    The variance check estimates E[(X - mu_analytic)^2], the mean squared
    deviation about the analytic mean: a plain mean of i.i.d. bounded
    terms, so its 3-sigma band is well calibrated even where the per-k
    distribution degenerates to a few points (where a sample-variance
    t-statistic has chi-square tails).  Under a correct mean formula it
    estimates the variance; under a wrong one it exceeds it, so errors in
    either formula are caught.

    ``flip_bfsk_var_sign`` negates one term of the BFSK variance formula;
    it exists only so tests can prove the checks catch a broken formula.
    """
    if timing is None:
        timing = SymbolTiming(ns=6, eps=0.37, eps0=0.53, k0=0)
    if n_realizations % n_replicates:
        raise ValueError("n_realizations must be divisible by n_replicates")
    pulse = RrcPulse.normalized(rolloff)
    n_samples = int(np.floor(n_symbols * timing.period))
    ks = _w_index_range(timing, n_samples)
    if k_values is None:
        picks = np.linspace(0.25, 0.75, 3)
        k_values = np.unique((ks[0] + picks * (ks.size - 1)).astype(int))
    k_values = np.asarray(k_values, dtype=int)

    rows: list[OracleCheckRow] = []
    for cell, modulation in enumerate(_SCHEME_ORDER):
        scheme = (cpfsk_scheme(2, h, timing) if modulation == "BFSK"
                  else linear_scheme(modulation))
        moments = (constellation_moments(scheme)
                   if modulation != "BFSK" else None)
        beta = (float(scheme.tone_offsets[1])
                if modulation == "BFSK" else None)
        for d_idx, delta in enumerate(deltas):
            rng = np.random.default_rng(
                np.random.SeedSequence(seed, spawn_key=(cell, d_idx)))
            im_w = _noiseless_im_w(modulation, pulse, timing, delta,
                                   n_samples, n_realizations, k_values, h,
                                   rng)
            for j, k in enumerate(k_values):
                column = im_w[:, j]
                if modulation == "BFSK":
                    q = q_profile(int(k), timing, beta)
                    a_mean = mean_im_bfsk(delta, q)
                    a_var = var_im_bfsk(delta, q)
                    if flip_bfsk_var_sign:
                        prod_cos2q = np.prod(np.cos(2.0 * q))
                        a_var = float(0.5 + 0.5 * prod_cos2q
                                      + np.sin(delta) ** 2
                                      * (prod_cos2q - np.prod(np.cos(q) ** 2)))
                    mean_name = f"mean_im_bfsk[{modulation},delta={delta:.6g}]"
                    var_name = f"var_im_bfsk[{modulation},delta={delta:.6g}]"
                else:
                    sums = pulse_corr_sums(pulse, timing, int(k))
                    a_mean = mean_im_linear(delta, sums, moments)
                    if modulation == "BPSK":
                        a_var = var_im_bpsk(delta, sums)
                        var_name = f"var_im_bpsk[{modulation},delta={delta:.6g}]"
                    else:
                        a_var = var_im_qampsk(delta, sums, moments)
                        var_name = f"var_im_qampsk[{modulation},delta={delta:.6g}]"
                    mean_name = f"mean_im_linear[{modulation},delta={delta:.6g}]"

                mc_mean, se_mean = _replicate_stats(
                    column, n_replicates, lambda g: g.mean(axis=1))
                rows.append(OracleCheckRow(
                    formula=mean_name, k=int(k), analytic=a_mean,
                    monte_carlo=mc_mean, std_err=se_mean,
                    passed=abs(mc_mean - a_mean) <= 3 * se_mean + 1e-12))

                squared_dev = (column - a_mean) ** 2
                mc_var, se_var = _replicate_stats(
                    squared_dev, n_replicates, lambda g: g.mean(axis=1))
                rows.append(OracleCheckRow(
                    formula=var_name, k=int(k), analytic=a_var,
                    monte_carlo=mc_var, std_err=se_var,
                    passed=abs(mc_var - a_var) <= 3 * se_var + 1e-12))
    return rows


def write_oracle_report(path, rows: list[OracleCheckRow]) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ORACLE_REPORT_FIELDS)
        for r in rows:
            writer.writerow([r.formula, r.k, format(r.analytic, ".17g"),
                             format(r.monte_carlo, ".17g"),
                             format(r.std_err, ".17g"),
                             "pass" if r.passed else "fail"])
