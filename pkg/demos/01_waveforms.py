"""Synthesize the clean transmit waveforms and look at their structure.

Generates an RRC-shaped 16-QAM burst and a binary CPFSK burst at the same
asynchronous timing (6.37 samples per symbol, fractional delay), prints a
few sanity numbers, and plots eye-opening snippets if matplotlib is around.

Run:  python demos/01_waveforms.py
"""

import numpy as np

from modrec.waveform import (RrcPulse, SymbolTiming, cpfsk_scheme,
                             cpfsk_symbol_bounds, draw_symbols, draw_tones,
                             linear_scheme, linear_symbol_bounds,
                             modulate_cpfsk, modulate_linear, rrc_eval)

rng = np.random.default_rng(42)
timing = SymbolTiming(ns=6, eps=0.37, eps0=0.53, k0=0)
n_samples = int(200 * timing.period)

# --- RRC pulse ------------------------------------------------------------
pulse = RrcPulse.normalized(0.3)
print(f"RRC rolloff 0.3: peak p(0) = {rrc_eval(0.0, pulse):.4f}, "
      f"normalization scale = {pulse.amplitude_scale:.6f}")
print(f"even symmetry: p(0.7) == p(-0.7) "
      f"-> {rrc_eval(0.7, pulse) == rrc_eval(-0.7, pulse)}")

# --- 16-QAM ---------------------------------------------------------------
scheme = linear_scheme("QAM16")
n_lo, n_hi = linear_symbol_bounds(pulse, timing, n_samples)
symbols = draw_symbols(scheme, n_hi - n_lo + 1, rng)
qam = modulate_linear(symbols, pulse, timing, n_samples)
print(f"\n16-QAM: {n_samples} samples from {symbols.size} symbols, "
      f"average power {np.mean(np.abs(qam) ** 2):.4f} (target 1)")

# --- binary CPFSK ----------------------------------------------------------
fsk_scheme = cpfsk_scheme(2, 0.5, timing)
lo, hi = cpfsk_symbol_bounds(timing, n_samples)
tones = draw_tones(fsk_scheme, hi - lo + 1, rng)
fsk = modulate_cpfsk(tones, fsk_scheme, timing, n_samples)
inc = np.angle(fsk[1:] * np.conj(fsk[:-1]))
print(f"BFSK h=1/2: tone offsets {fsk_scheme.tone_offsets} rad/sample, "
      f"|s| in [{np.abs(fsk).min():.12f}, {np.abs(fsk).max():.12f}]")
print(f"per-sample phase increments within [{inc.min():.4f}, "
      f"{inc.max():.4f}] (max tone offset "
      f"{np.abs(fsk_scheme.tone_offsets).max():.4f})")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(3, 1, figsize=(9, 7), constrained_layout=True)
    t = np.arange(-8, 8, 0.01)
    axes[0].plot(t, rrc_eval(t, pulse))
    axes[0].set_title("root-raised-cosine pulse (rolloff 0.3)")
    axes[1].plot(qam[:400].real, label="I")
    axes[1].plot(qam[:400].imag, label="Q")
    axes[1].legend()
    axes[1].set_title("16-QAM baseband (asynchronous sampling)")
    axes[2].plot(inc[:400])
    axes[2].set_title("BFSK per-sample phase increment")
    fig.savefig("demo_waveforms.png", dpi=120)
    print("\nwrote demo_waveforms.png")
except ImportError:
    print("\nmatplotlib not installed; skipping plots")
