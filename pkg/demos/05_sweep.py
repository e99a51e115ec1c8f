"""A miniature accuracy sweep over (classifier x training size x SNR).

Uses a cut-down grid so it finishes in about a minute; the full desk or
paper presets follow the same path (see the `modrec sweep` CLI).  Plots
accuracy curves if matplotlib is installed.

Run:  python demos/05_sweep.py
"""

import time

from modrec.harness import ALL_MODULATIONS, ExperimentConfig, run_sweep

config = ExperimentConfig(
    modulations=ALL_MODULATIONS,
    n_per_modulation=120,
    n_symbols=300,
    snr_grid_db=(-10.0, 0.0, 10.0, 20.0),
    training_sizes=(30, 80),
    classifiers=("SVM", "LR", "NN"),
    master_seed=20260809,
)

t0 = time.time()
result = run_sweep(config)
print(f"swept {len(result.rows)} grid points in {time.time() - t0:.0f}s\n")

print("classifier  size  " + "".join(f"{s:+6.0f}dB" for s in
                                      config.snr_grid_db))
for clf in config.classifiers:
    for size in config.training_sizes:
        accs = [result.get(clf, size, snr).accuracy
                for snr in config.snr_grid_db]
        print(f"{clf:>10}  {size:4d}  "
              + "".join(f"{a:8.3f}" for a in accs))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5), constrained_layout=True)
    for clf in config.classifiers:
        accs = [result.get(clf, 80, snr).accuracy
                for snr in config.snr_grid_db]
        ax.plot(config.snr_grid_db, accs, marker="o", label=f"{clf}80")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("accuracy")
    ax.set_title("CPFSK vs PSK/QAM separation (mini sweep)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.savefig("demo_sweep.png", dpi=120)
    print("\nwrote demo_sweep.png")
except ImportError:
    print("\nmatplotlib not installed; skipping the plot")
