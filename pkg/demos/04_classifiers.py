"""Train the three classifiers on one SNR point and compare them.

Small-scale version of a single sweep grid point: generate labeled
features at 5 dB, standardize, train SVM / logistic regression / the
3-10-1 network, and score held-out accuracy.

Run:  python demos/04_classifiers.py
"""

import numpy as np

from modrec.features import feature_matrix
from modrec.harness import (ALL_MODULATIONS, ExperimentConfig,
                            evaluate_classifier, generate_dataset,
                            train_classifier, _split_by_size)

config = ExperimentConfig(modulations=ALL_MODULATIONS, n_per_modulation=150,
                          n_symbols=300, snr_grid_db=(5.0,),
                          training_sizes=(75,), master_seed=20260809)

print("generating 7 x 150 realizations at 5 dB "
      f"({config.n_symbols} symbols each) ...")
rows = generate_dataset(config, 5.0)
train_rows, test_rows = _split_by_size(rows, config, 75)
x_train, y_train = feature_matrix(train_rows)
x_test, y_test = feature_matrix(test_rows)
print(f"training on {len(train_rows)} rows, testing on {len(test_rows)}")

for kind in ("SVM", "LR", "NN"):
    trained = train_classifier(kind, x_train, y_train, seed=1)
    acc = evaluate_classifier(trained, x_test, y_test)
    extra = ""
    if kind == "LR":
        extra = (f" (ascent iterations: {trained.model.n_iter},"
                 f" converged: {trained.model.converged})")
    elif kind == "SVM":
        extra = f" (epochs: {trained.model.n_epochs})"
    else:
        extra = f" (best epoch by validation loss: {trained.model.best_epoch})"
    print(f"  {kind:3s}: held-out accuracy {acc:.3f}{extra}")

print("\nmodel weights live in a JSON document; round-tripping one:")
import tempfile
from pathlib import Path

from modrec.classifiers import load_model, save_model

trained = train_classifier("LR", x_train, y_train, seed=1)
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "lr.json"
    save_model(path, trained)
    back = load_model(path)
    same = np.array_equal(back.predict(x_test)[0],
                          trained.predict(x_test)[0])
    print(f"  reloaded model gives identical predictions: {same}")
    print(f"  document size: {path.stat().st_size} bytes")
