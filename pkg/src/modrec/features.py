"""Lag-product features and their CSV serialization.

The working quantity is w[k] = s[k] * conj(s[k-1]).  With the received
signal downconverted so its spectral center sits at 0, the three features
are the sample mean of Re(w), the sample variance of Im(w), and the sample
variance of Re(w).  The Re-based statistics equal the Im-based statistics of
the same signal re-centered at pi/2, since shifting the center by pi/2
rotates every w[k] by exactly j.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

FEATURE_FIELDS = ("label", "modulation", "snr_db", "seed", "f1", "f2", "f3")


@dataclass(frozen=True)
class FeatureVector:
    """Three features plus provenance for one realization."""

    f1: float
    f2: float
    f3: float
    label: int
    modulation: str
    snr_db: float
    seed: int


def lag_product(s) -> np.ndarray:
    """w[k] = s[k] * conj(s[k-1]), one element shorter than the input."""
    s = np.asarray(s, dtype=complex)
    if s.size < 2:
        raise ValueError("lag product needs at least 2 samples")
    return s[1:] * np.conj(s[:-1])


def shift_center(s, phi: float) -> np.ndarray:
    """Translate the spectral center by phi radians/sample."""
    s = np.asarray(s, dtype=complex)
    return s * np.exp(1j * phi * np.arange(s.size))


def extract_features(s0) -> tuple[float, float, float]:
    """(f1, f2, f3) of a 0-centered received sequence.

    Sample variances use the unbiased 1/(N-1) estimator; a single lag
    product (input length 2) yields variance 0.
    """
    w = lag_product(s0)
    re = w.real
    im = w.imag
    if w.size < 2:
        return float(re.mean()), 0.0, 0.0
    return (float(re.mean()),
            float(im.var(ddof=1)),
            float(re.var(ddof=1)))


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_features_csv(path, rows: list[FeatureVector]) -> None:
    """Write rows in the canonical column order with 17-digit reals."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FEATURE_FIELDS)
        for r in rows:
            writer.writerow([_fmt(v) for v in
                             (r.label, r.modulation, r.snr_db, r.seed,
                              r.f1, r.f2, r.f3)])


def read_features_csv(path) -> list[FeatureVector]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(FEATURE_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"feature CSV is missing columns {sorted(missing)}")
        rows = []
        for rec in reader:
            rows.append(FeatureVector(
                f1=float(rec["f1"]), f2=float(rec["f2"]), f3=float(rec["f3"]),
                label=int(rec["label"]), modulation=rec["modulation"],
                snr_db=float(rec["snr_db"]), seed=int(rec["seed"])))
    return rows


def feature_matrix(rows: list[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    """Stack rows into (X, y) for the classifiers."""
    x = np.array([[r.f1, r.f2, r.f3] for r in rows], dtype=float)
    y = np.array([r.label for r in rows], dtype=int)
    return x, y
