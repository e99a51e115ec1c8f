"""Closed-form moments versus Monte-Carlo, at single sample indices.

The per-k mean and variance of Im(w[k]) have closed forms for noiseless,
fading-free signals.  This demo prints them next to Monte-Carlo estimates
for a QAM burst and a BFSK burst, then runs the full bundled check.

Run:  python demos/03_analytic_oracle.py
"""

import numpy as np

from modrec.oracle import (constellation_moments, mean_im_bfsk,
                           mean_im_linear, pulse_corr_sums, q_profile,
                           run_oracle_checks, var_im_bfsk, var_im_qampsk)
from modrec.waveform import (RrcPulse, SymbolTiming, cpfsk_scheme,
                             linear_scheme)

timing = SymbolTiming(ns=6, eps=0.37, eps0=0.53, k0=0)
pulse = RrcPulse.normalized(0.35)
delta = np.pi / 20

print("closed forms at three sample indices (16-QAM, delta = pi/20):")
moments = constellation_moments(linear_scheme("QAM16"))
for k in (60, 61, 62):
    sums = pulse_corr_sums(pulse, timing, k)
    print(f"  k={k}: mean {mean_im_linear(delta, sums, moments):+.5f}  "
          f"var {var_im_qampsk(delta, sums, moments):.5f}  "
          f"(s_pp={sums.s_pp:.4f})")

print("\nsame for BFSK (h = 1/2):")
beta = float(cpfsk_scheme(2, 0.5, timing).tone_offsets[1])
for k in (60, 61, 62):
    q = q_profile(k, timing, beta)
    print(f"  k={k}: mean {mean_im_bfsk(delta, q):+.5f}  "
          f"var {var_im_bfsk(delta, q):.5f}  (Q={np.round(q, 4)})")

print("\nfull Monte-Carlo cross-check (a smaller run than the acceptance "
      "suite):")
rows = run_oracle_checks(n_realizations=2000, n_symbols=30, seed=7)
n_pass = sum(r.passed for r in rows)
print(f"  {n_pass}/{len(rows)} checks passed")
for r in rows[:6]:
    print(f"  {r.formula:42s} k={r.k:3d} analytic={r.analytic:+.5f} "
          f"mc={r.monte_carlo:+.5f} se={r.std_err:.2e}")
print("  ...")
