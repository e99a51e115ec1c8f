"""Clean complex-baseband waveform synthesis.

Two transmitter families are generated at a fixed sampling rate:

* linear modulations (BPSK, 4-PSK, 8-PSK, 16-QAM) with root-raised-cosine
  pulse shaping, and
* continuous-phase FSK (2/4/8-ary) with a rectangular instantaneous-frequency
  pulse, whose phase is the running integral of the selected tone offsets.

The symbol period is ``(ns + eps) * Ts`` with a fractional part ``eps``, so
sampling instants and symbol boundaries are deliberately asynchronous.  A
fractional delay ``eps0`` shifts the symbol grid relative to the sampling
grid; the integer part of the delay is a plain sample shift and is applied by
the channel stage, not here.

All functions are pure given an explicit ``numpy.random.Generator``; there is
no module-level randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

LINEAR_NAMES = ("BPSK", "PSK4", "PSK8", "QAM16")
CPFSK_ORDERS = (2, 4, 8)

_POWER_GRID = 4096  # phase resolution for the pulse power normalization


@dataclass(frozen=True)
class SymbolTiming:
    """Sampling/symbol-grid relation for one realization.

    ``ns`` is the nominal oversampling factor and ``eps`` the fractional part
    of the symbol period, so one symbol lasts ``ns + eps`` samples.  ``eps0``
    is the fractional delay in sampling periods realized analytically by the
    waveform generators; ``k0`` is the integer delay applied later as a
    sample shift by the channel.
    """

    ns: int
    eps: float = 0.0
    eps0: float = 0.0
    k0: int = 0

    def __post_init__(self):
        if self.ns < 1:
            raise ValueError("oversampling ns must be >= 1")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError("eps must lie in [0, 1)")
        if not 0.0 <= self.eps0 < 1.0:
            raise ValueError("eps0 must lie in [0, 1)")
        if not 0 <= self.k0 <= math.ceil(self.ns + self.eps) - 1:
            raise ValueError("k0 must lie in {0, ..., ceil(ns+eps)-1}")

    @property
    def period(self) -> float:
        """Symbol period in sampling periods."""
        return self.ns + self.eps

    @property
    def t0(self) -> float:
        """Total delay k0 + eps0 in sampling periods."""
        return self.k0 + self.eps0


@dataclass(frozen=True)
class RrcPulse:
    """Root-raised-cosine pulse, evaluated in symbol-period time units.

    ``amplitude_scale`` multiplies the unit-amplitude RRC so that a linearly
    modulated signal with a unit-power constellation has unit long-run
    average power (see :meth:`normalized`).  The pulse is truncated to
    ``span_symbols`` symbol periods on each side.
    """

    rolloff: float
    amplitude_scale: float = 1.0
    span_symbols: int = 8

    def __post_init__(self):
        if not 0.0 < self.rolloff <= 1.0:
            raise ValueError("rolloff must lie in (0, 1]")
        if self.amplitude_scale <= 0.0:
            raise ValueError("amplitude_scale must be positive")
        if self.span_symbols < 1:
            raise ValueError("span_symbols must be >= 1")

    @classmethod
    def normalized(cls, rolloff: float, span_symbols: int = 8) -> "RrcPulse":
        """Pulse scaled for unit average transmit power.

        The scale is 1/sqrt of the symbol-phase average of
        ``sum_n p(u - n)^2``, which equals the average modulated power for
        independent unit-power symbols.  It depends only on the roll-off
        (and the truncation), not on the oversampling.
        """
        scale = _unit_power_scale(float(rolloff), int(span_symbols))
        return cls(rolloff=float(rolloff), amplitude_scale=scale,
                   span_symbols=int(span_symbols))


@dataclass(frozen=True, eq=False)
class LinearScheme:
    """A linear modulation: named constellation with unit average power."""

    name: str
    constellation: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.constellation, dtype=complex)
        object.__setattr__(self, "constellation", pts)
        power = np.mean(np.abs(pts) ** 2)
        if abs(power - 1.0) > 1e-12:
            raise ValueError(f"{self.name}: average constellation power "
                             f"{power!r} is not 1")

    @property
    def order(self) -> int:
        return self.constellation.size


@dataclass(frozen=True, eq=False)
class CpfskScheme:
    """m-ary continuous-phase FSK tone set.

    ``tone_offsets`` are per-sample phase increments in radians relative to
    the residual carrier, symmetric about 0 and equally spaced:
    ``(2i - (m+1)) * h*pi / ((m-1) * (ns+eps))`` for tone i in 1..m.
    """

    order: int
    h: float
    tone_offsets: np.ndarray

    def __post_init__(self):
        if self.order not in CPFSK_ORDERS:
            raise ValueError(f"CPFSK order must be one of {CPFSK_ORDERS}")
        if self.h <= 0.0:
            raise ValueError("modulation index h must be positive")
        off = np.asarray(self.tone_offsets, dtype=float)
        object.__setattr__(self, "tone_offsets", off)
        if off.size != self.order:
            raise ValueError("tone_offsets size must equal the order")


def linear_scheme(name: str) -> LinearScheme:
    """Return one of the four supported linear schemes by name."""
    if name == "BPSK":
        points = np.array([1.0 + 0.0j, -1.0 + 0.0j])
    elif name == "PSK4":
        points = np.exp(1j * (2 * np.arange(4) + 1) * np.pi / 4)
    elif name == "PSK8":
        points = np.exp(1j * (2 * np.arange(8) + 1) * np.pi / 8)
    elif name == "QAM16":
        levels = np.array([-3.0, -1.0, 1.0, 3.0])
        grid = levels[:, None] + 1j * levels[None, :]
        points = grid.ravel() / np.sqrt(10.0)
    else:
        raise ValueError(f"unknown linear scheme {name!r}; "
                         f"expected one of {LINEAR_NAMES}")
    return LinearScheme(name=name, constellation=points)


def cpfsk_scheme(order: int, h: float, timing: SymbolTiming) -> CpfskScheme:
    """Build the tone set for an m-ary CPFSK at the given symbol timing."""
    m = int(order)
    if m not in CPFSK_ORDERS:
        raise ValueError(f"CPFSK order must be one of {CPFSK_ORDERS}")
    i = np.arange(1, m + 1)
    offsets = (2 * i - (m + 1)) * h * np.pi / ((m - 1) * timing.period)
    return CpfskScheme(order=m, h=float(h), tone_offsets=offsets)


def modulation_index(ns: int, eps: float, delta: float) -> float:
    """Modulation index from the per-sample peak frequency deviation."""
    return (ns + eps) * delta / np.pi


_SINGULAR_TOL = 1e-8


def _rrc_limits(beta: float) -> tuple[float, float]:
    """Analytic values at the removable singularities t=0 and |t|=1/(4b)."""
    at_zero = 1.0 - beta + 4.0 * beta / np.pi
    at_pole = (beta / np.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * beta))
        + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * beta)))
    return at_zero, at_pole


def _rrc_patch(out: np.ndarray, t: np.ndarray, beta: float,
               span: int) -> np.ndarray:
    """Replace singular points by their limits and truncate to the span."""
    at = np.abs(t)
    at_zero, at_pole = _rrc_limits(beta)
    near_zero = at < _SINGULAR_TOL
    if near_zero.any():
        out[near_zero] = at_zero
    near_pole = np.abs(4.0 * beta * at - 1.0) < _SINGULAR_TOL
    if near_pole.any():
        out[near_pole] = at_pole
    out[at > span] = 0.0
    return out


def _rrc_unit(t, rolloff: float, span: int):
    """Unit-amplitude RRC p(t), t in symbol periods, truncated to |t|<=span.

    The removable singularities at t = 0 and |t| = 1/(4*rolloff) are replaced
    by their analytic limits.
    """
    t = np.asarray(t, dtype=float)
    shape = t.shape
    t = np.atleast_1d(t)
    beta = rolloff
    with np.errstate(divide="ignore", invalid="ignore"):
        num = (np.sin(np.pi * t * (1.0 - beta))
               + 4.0 * beta * t * np.cos(np.pi * t * (1.0 + beta)))
        den = np.pi * t * (1.0 - (4.0 * beta * t) ** 2)
        out = num / den
    return _rrc_patch(out, t, beta, span).reshape(shape)


def _rrc_window_fast(frac: np.ndarray, window: np.ndarray, beta: float,
                     span: int) -> np.ndarray:
    """Unit RRC at t[k, d] = frac[k] - window[d], the modulator's hot path.

    Uses the angle-addition identities so sin/cos run on the N + W distinct
    positions instead of all N*W points; everything else is cheap broadcast
    arithmetic.  Agrees with :func:`_rrc_unit` to within a few ulp (the
    package tests assert 1e-12).
    """
    a = np.pi * (1.0 - beta)
    b = np.pi * (1.0 + beta)
    sa_f, ca_f = np.sin(a * frac), np.cos(a * frac)
    sa_w, ca_w = np.sin(a * window), np.cos(a * window)
    sb_f, cb_f = np.sin(b * frac), np.cos(b * frac)
    sb_w, cb_w = np.sin(b * window), np.cos(b * window)

    t = frac[:, None] - window[None, :]
    # sin(a*t) reconstructed from the per-axis factors
    num = sa_f[:, None] * ca_w[None, :]
    num -= ca_f[:, None] * sa_w[None, :]
    # cos(b*t), scaled by 4*beta*t, added in place
    cos_bt = cb_f[:, None] * cb_w[None, :]
    cos_bt += sb_f[:, None] * sb_w[None, :]
    cos_bt *= t
    cos_bt *= 4.0 * beta
    num += cos_bt

    den = np.multiply(t, 4.0 * beta)
    np.multiply(den, den, out=den)
    np.subtract(1.0, den, out=den)
    den *= t
    den *= np.pi
    with np.errstate(divide="ignore", invalid="ignore"):
        np.divide(num, den, out=num)
    return _rrc_patch(num, t, beta, span)


@lru_cache(maxsize=None)
def _unit_power_scale(rolloff: float, span: int) -> float:
    u = (np.arange(_POWER_GRID) + 0.5) / _POWER_GRID
    n = np.arange(-span, span + 2)
    vals = _rrc_unit(u[:, None] - n[None, :], rolloff, span)
    mean_power = float(np.mean(np.sum(vals ** 2, axis=1)))
    return 1.0 / np.sqrt(mean_power)


def rrc_eval(t, pulse: RrcPulse):
    """Evaluate the pulse at time(s) t given in symbol periods.

    Returns 0 beyond the truncation span and the analytic limits at the
    singular points.  Scalar in, scalar out; array in, array out.
    """
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("pulse evaluation requires finite time values")
    out = pulse.amplitude_scale * _rrc_unit(t, pulse.rolloff,
                                            pulse.span_symbols)
    if out.ndim == 0:
        return float(out)
    return out


def draw_symbols(scheme: LinearScheme, n: int,
                 rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. symbols, uniform over the constellation."""
    if n < 1:
        raise ValueError("symbol count must be >= 1")
    idx = rng.integers(0, scheme.order, size=n)
    return scheme.constellation[idx]


def draw_tones(scheme: CpfskScheme, n: int,
               rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. tone indices, uniform over 1..order."""
    if n < 1:
        raise ValueError("symbol count must be >= 1")
    return rng.integers(1, scheme.order + 1, size=n)


def _symbol_positions(timing: SymbolTiming, n_samples: int):
    """Per-sample symbol coordinates u_k = (k - eps0) / period."""
    k = np.arange(n_samples)
    u = (k - timing.eps0) / timing.period
    base = np.floor(u).astype(np.int64)
    return u, base


def linear_symbol_bounds(pulse: RrcPulse, timing: SymbolTiming,
                         n_samples: int) -> tuple[int, int]:
    """Inclusive symbol-index range contributing to samples 0..n_samples-1."""
    span = pulse.span_symbols
    u0 = (0 - timing.eps0) / timing.period
    u1 = (n_samples - 1 - timing.eps0) / timing.period
    return int(np.floor(u0)) - span, int(np.floor(u1)) + span


def cpfsk_symbol_bounds(timing: SymbolTiming,
                        n_samples: int) -> tuple[int, int]:
    """Inclusive symbol-index range needed to integrate the phase."""
    u0 = (0 - timing.eps0) / timing.period
    u1 = (n_samples - 1 - timing.eps0) / timing.period
    return min(int(np.floor(u0)), 0), max(int(np.floor(u1)), 0)


def _check_coverage(n_provided: int, first_index: int,
                    bounds: tuple[int, int], what: str) -> None:
    n_lo, n_hi = bounds
    if first_index > n_lo or first_index + n_provided - 1 < n_hi:
        raise ValueError(
            f"insufficient {what}: need indices [{n_lo}, {n_hi}], got "
            f"[{first_index}, {first_index + n_provided - 1}]")


def modulate_linear(symbols, pulse: RrcPulse, timing: SymbolTiming,
                    n_samples: int, first_index: int | None = None
                    ) -> np.ndarray:
    """Sample the RRC-shaped sum of symbol pulses.

    Sample k takes the value ``sum_n symbols[n] * p((k - eps0)/period - n)``.
    ``symbols[0]`` corresponds to symbol index ``first_index``; when omitted,
    the input is assumed to start at the lower edge of
    :func:`linear_symbol_bounds`, which also defines how many symbols are
    required (extra trailing symbols are ignored).
    """
    symbols = np.asarray(symbols, dtype=complex)
    bounds = linear_symbol_bounds(pulse, timing, n_samples)
    if first_index is None:
        first_index = bounds[0]
    _check_coverage(symbols.size, first_index, bounds, "symbols")

    span = pulse.span_symbols
    u, base = _symbol_positions(timing, n_samples)
    window = np.arange(-span, span + 1)
    n = base[:, None] + window[None, :]
    pv = _rrc_window_fast(u - base, window.astype(float), pulse.rolloff,
                          span)
    pv *= pulse.amplitude_scale
    return np.sum(symbols[n - first_index] * pv, axis=1)


def pulse_matrix(pulse: RrcPulse, timing: SymbolTiming,
                 n_samples: int) -> np.ndarray:
    """Dense matrix M with M[i, k] = p(u_k - (n_lo + i)).

    ``symbols @ pulse_matrix(...)`` equals :func:`modulate_linear` up to
    floating-point summation order; handy for synthesizing many symbol
    vectors at a fixed timing in one matrix product.
    """
    n_lo, n_hi = linear_symbol_bounds(pulse, timing, n_samples)
    u, _ = _symbol_positions(timing, n_samples)
    n = np.arange(n_lo, n_hi + 1)
    return rrc_eval(u[None, :] - n[:, None], pulse)


def modulate_cpfsk(tone_indices, scheme: CpfskScheme, timing: SymbolTiming,
                   n_samples: int, first_index: int | None = None
                   ) -> np.ndarray:
    """Phase-continuous FSK samples for a tone-index sequence (values 1..m).

    The instantaneous-frequency pulse is rectangular over one symbol period,
    so the phase is piecewise linear in time: a full symbol advances the
    phase by ``tone_offset * period`` and a sample interval straddling a
    symbol boundary blends the two adjacent tones in proportion to its
    overlap with each.  The phase reference is 0 at transmitted-signal time
    zero.  Output samples all have unit magnitude.
    """
    idx = np.asarray(tone_indices)
    if idx.size and (idx.min() < 1 or idx.max() > scheme.order):
        raise ValueError(f"tone indices must lie in [1, {scheme.order}]")
    bounds = cpfsk_symbol_bounds(timing, n_samples)
    if first_index is None:
        first_index = bounds[0]
    _check_coverage(idx.size, first_index, bounds, "tone indices")

    offsets = scheme.tone_offsets[idx - 1]
    prefix = np.concatenate(([0.0], np.cumsum(offsets)))
    u, base = _symbol_positions(timing, n_samples)
    j = base - first_index
    frac = u - base
    phase = timing.period * (prefix[j] + offsets[j] * frac)
    phase0 = timing.period * prefix[0 - first_index]
    return np.exp(1j * (phase - phase0))
