"""Monte-Carlo experiment orchestration.

Generates labeled feature datasets over an SNR grid, trains each classifier
at each (SNR, training-size) grid point, and scores held-out accuracy.  The
whole sweep is a pure function of its configuration: every realization is
synthesized from a child seed derived from (master seed, modulation,
realization index, SNR), so results are byte-identical across runs and
across worker counts.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .channel import apply_channel, draw_channel
from .classifiers import (LogRegConfig, MlpConfig, SvmConfig,
                          TrainedClassifier, accuracy, fit_standardizer,
                          predict, train_logreg, train_mlp, train_svm)
from .features import FeatureVector, extract_features, feature_matrix
from .waveform import (RrcPulse, SymbolTiming, cpfsk_scheme,
                       cpfsk_symbol_bounds, draw_symbols, draw_tones,
                       linear_scheme, linear_symbol_bounds, modulate_cpfsk,
                       modulate_linear)

# Modulations in the canonical order; the first three carry label 1 (CPFSK).
CPFSK_MODULATIONS = ("BFSK", "FSK4", "FSK8")
LINEAR_MODULATIONS = ("BPSK", "PSK4", "PSK8", "QAM16")
ALL_MODULATIONS = CPFSK_MODULATIONS + LINEAR_MODULATIONS

_CPFSK_ORDER = {"BFSK": 2, "FSK4": 4, "FSK8": 8}

ROLLOFF_CHOICES = tuple(k / 10 for k in range(1, 11))

RESULT_FIELDS = ("classifier", "training_size", "snr_db", "accuracy",
                 "n_test", "seed")

CLASSIFIER_NAMES = ("SVM", "LR", "NN")


@dataclass(frozen=True)
class ExperimentConfig:
    modulations: tuple[str, ...] = ALL_MODULATIONS
    n_per_modulation: int = 1000
    n_symbols: int = 600
    ns: int = 6
    h: float = 0.5
    snr_grid_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    training_sizes: tuple[int, ...] = (50, 1000, 2000)
    classifiers: tuple[str, ...] = CLASSIFIER_NAMES
    master_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for m in self.modulations:
            if m not in ALL_MODULATIONS:
                raise ValueError(f"unknown modulation {m!r}")
        if self.n_per_modulation < 1 or self.n_symbols < 1:
            raise ValueError("counts must be >= 1")
        for size in self.training_sizes:
            if not 1 <= size < self.n_per_modulation:
                raise ValueError(
                    f"training size {size} must be positive and smaller than "
                    f"n_per_modulation={self.n_per_modulation}")
        for c in self.classifiers:
            if c not in CLASSIFIER_NAMES:
                raise ValueError(f"unknown classifier {c!r}")


# n_per_modulation x n_symbols scales; acceptance checks run on "desk".
PRESETS = {
    "paper": dict(n_per_modulation=10000, n_symbols=600),
    "desk": dict(n_per_modulation=3000, n_symbols=600),
    "ci": dict(n_per_modulation=200, n_symbols=150,
               snr_grid_db=(0.0, 10.0, 20.0), training_sizes=(20, 50)),
}


def preset_config(name: str, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; "
                         f"expected one of {sorted(PRESETS)}")
    fields = dict(PRESETS[name])
    fields.update(overrides)
    return ExperimentConfig(**fields)


@dataclass(frozen=True)
class RealizationParams:
    """Every per-realization draw, enough to regenerate the realization."""

    modulation: str
    seed: int
    snr_db: float | None
    n_symbols: int
    ns: int
    h: float
    rolloff: float
    eps: float
    eps0: float
    k0: int
    alpha: float
    psi: float
    theta_c: float
    delta_prime: float
    n_samples: int


def modulation_label(modulation: str) -> int:
    return 1 if modulation in CPFSK_MODULATIONS else 0


def _snr_key(snr_db: float) -> int:
    """Stable integer encoding of the SNR value for seed derivation."""
    return int(np.float64(snr_db).view(np.uint64))


def realization_seed(master_seed: int, modulation: str,
                     realization_index: int, snr_db: float) -> int:
    """Child seed for one realization (splittable-stream construction)."""
    mod_index = ALL_MODULATIONS.index(modulation)
    ss = np.random.SeedSequence(
        master_seed,
        spawn_key=(mod_index, realization_index, _snr_key(snr_db)))
    return int(ss.generate_state(1, np.uint64)[0])


def make_realization(modulation: str, snr_db: float | None, seed: int,
                     n_symbols: int = 600, ns: int = 6, h: float = 0.5
                     ) -> tuple[np.ndarray, RealizationParams]:
    """Synthesize one received realization from its seed.

    Draw order is fixed: roll-off, eps, eps0, channel (offset, phases,
    fading, integer delay), symbols, then noise.  The realization is
    generated at spectral center 0, i.e. the carrier offset is the residual
    delta_prime in [-pi/20, pi/20].
    """
    if modulation not in ALL_MODULATIONS:
        raise ValueError(f"unknown modulation {modulation!r}")
    rng = np.random.default_rng(seed)
    rolloff = ROLLOFF_CHOICES[rng.integers(0, len(ROLLOFF_CHOICES))]
    eps = rng.uniform(0.0, 1.0)
    eps0 = rng.uniform(0.0, 1.0)
    params = draw_channel(rng, gamma_prime=0.0, ns=ns, eps=eps,
                          snr_db=snr_db)
    timing = SymbolTiming(ns=ns, eps=eps, eps0=eps0, k0=params.k0)

    n_samples = int(np.floor(n_symbols * timing.period))
    n_clean = n_samples + params.k0
    if modulation in _CPFSK_ORDER:
        scheme = cpfsk_scheme(_CPFSK_ORDER[modulation], h, timing)
        n_lo, n_hi = cpfsk_symbol_bounds(timing, n_clean)
        tones = draw_tones(scheme, n_hi - n_lo + 1, rng)
        clean = modulate_cpfsk(tones, scheme, timing, n_clean)
    else:
        pulse = RrcPulse.normalized(rolloff)
        scheme = linear_scheme(modulation)
        n_lo, n_hi = linear_symbol_bounds(pulse, timing, n_clean)
        symbols = draw_symbols(scheme, n_hi - n_lo + 1, rng)
        clean = modulate_linear(symbols, pulse, timing, n_clean)

    received = apply_channel(clean, params, rng)
    info = RealizationParams(
        modulation=modulation, seed=seed, snr_db=snr_db,
        n_symbols=n_symbols, ns=ns, h=h, rolloff=rolloff, eps=eps,
        eps0=eps0, k0=params.k0, alpha=params.alpha, psi=params.psi,
        theta_c=params.theta_c, delta_prime=params.delta_prime,
        n_samples=n_samples)
    return received, info


def _feature_row(task) -> FeatureVector:
    modulation, snr_db, seed, n_symbols, ns, h = task
    try:
        received, _ = make_realization(modulation, snr_db, seed,
                                       n_symbols=n_symbols, ns=ns, h=h)
        f1, f2, f3 = extract_features(received)
    except Exception as exc:
        raise RuntimeError(
            f"realization failed: modulation={modulation} snr_db={snr_db} "
            f"seed={seed}") from exc
    return FeatureVector(f1=f1, f2=f2, f3=f3,
                         label=modulation_label(modulation),
                         modulation=modulation, snr_db=snr_db, seed=seed)


def _feature_rows(tasks: list) -> list[FeatureVector]:
    return [_feature_row(t) for t in tasks]


def generate_dataset(config: ExperimentConfig, snr_db: float,
                     workers: int | None = None) -> list[FeatureVector]:
    """All realizations for one SNR, in canonical (modulation, index) order."""
    tasks = [(mod, snr_db,
              realization_seed(config.master_seed, mod, idx, snr_db),
              config.n_symbols, config.ns, config.h)
             for mod in config.modulations
             for idx in range(config.n_per_modulation)]
    workers = config.workers if workers is None else workers
    if workers <= 1:
        return _feature_rows(tasks)
    chunks = [tasks[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_feature_rows, chunks))
    # Undo the round-robin split to restore canonical order.
    rows: list[FeatureVector] = [None] * len(tasks)  # type: ignore
    for offset, chunk_rows in enumerate(results):
        rows[offset::workers] = chunk_rows
    return rows


# ---------------------------------------------------------------------------
# Training and sweeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    classifier: str
    training_size: int
    snr_db: float
    accuracy: float
    n_test: int
    seed: int


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RESULT_FIELDS)
            for r in self.rows:
                writer.writerow([r.classifier, r.training_size,
                                 format(r.snr_db, ".17g"),
                                 format(r.accuracy, ".17g"),
                                 r.n_test, r.seed])

    def get(self, classifier: str, training_size: int,
            snr_db: float) -> SweepRow:
        for r in self.rows:
            if (r.classifier == classifier
                    and r.training_size == training_size
                    and r.snr_db == snr_db):
                return r
        raise KeyError((classifier, training_size, snr_db))


def trainer_seed(master_seed: int, classifier: str, training_size: int,
                 snr_db: float) -> int:
    """Deterministic per-grid-point trainer seed, disjoint from realization
    seeds (the first spawn-key component starts beyond any modulation index).
    """
    clf_index = CLASSIFIER_NAMES.index(classifier)
    ss = np.random.SeedSequence(
        master_seed,
        spawn_key=(1000 + clf_index, training_size, _snr_key(snr_db)))
    return int(ss.generate_state(1, np.uint64)[0])


def train_classifier(kind: str, x_raw, y, seed: int | None = None,
                     config=None, metadata: dict | None = None
                     ) -> TrainedClassifier:
    """Standardize, train one model, and bundle the result."""
    if kind not in CLASSIFIER_NAMES:
        raise ValueError(f"unknown classifier {kind!r}")
    x_raw = np.asarray(x_raw, dtype=float)
    y = np.asarray(y, dtype=int)
    standardizer = fit_standardizer(x_raw)
    z = standardizer.transform(x_raw)
    if kind == "LR":
        config = config or LogRegConfig()
        model = train_logreg(z, y, config)
    elif kind == "SVM":
        config = config or SvmConfig()
        model = train_svm(z, 2 * y - 1, config)
    else:
        config = config or MlpConfig()
        if seed is not None:
            config = replace(config, seed=seed)
        model = train_mlp(z, y, config)
    meta = {"n_train": int(y.size)}
    meta.update(metadata or {})
    return TrainedClassifier(kind=kind, model=model,
                             standardizer=standardizer, config=config,
                             seed=seed, metadata=meta)


def evaluate_classifier(trained: TrainedClassifier, x_raw, y) -> float:
    labels, _ = trained.predict(x_raw)
    return accuracy(labels, np.asarray(y, dtype=int))


def _split_by_size(rows: list[FeatureVector], config: ExperimentConfig,
                   size: int):
    """First `size` rows of each modulation train; the rest test."""
    train: list[FeatureVector] = []
    test: list[FeatureVector] = []
    n = config.n_per_modulation
    for m, mod in enumerate(config.modulations):
        block = rows[m * n:(m + 1) * n]
        train.extend(block[:size])
        test.extend(block[size:])
    return train, test


def run_sweep(config: ExperimentConfig,
              workers: int | None = None) -> SweepResult:
    """Train and score every (classifier, training size, SNR) grid point.

    One model is trained per SNR point; the test set is every realization
    not used for training at that SNR.  Row order is canonical:
    classifier, then training size, then SNR.
    """
    accs: dict[tuple[str, int, float], tuple[float, int]] = {}
    for snr_db in config.snr_grid_db:
        rows = generate_dataset(config, snr_db, workers=workers)
        for size in config.training_sizes:
            train_rows, test_rows = _split_by_size(rows, config, size)
            x_train, y_train = feature_matrix(train_rows)
            x_test, y_test = feature_matrix(test_rows)
            for kind in config.classifiers:
                seed = trainer_seed(config.master_seed, kind, size, snr_db)
                trained = train_classifier(kind, x_train, y_train, seed=seed)
                acc = evaluate_classifier(trained, x_test, y_test)
                accs[(kind, size, snr_db)] = (acc, y_test.size)

    result = SweepResult()
    for kind in config.classifiers:
        for size in config.training_sizes:
            for snr_db in config.snr_grid_db:
                acc, n_test = accs[(kind, size, snr_db)]
                result.rows.append(SweepRow(
                    classifier=kind, training_size=size, snr_db=snr_db,
                    accuracy=acc, n_test=n_test,
                    seed=config.master_seed))
    return result


def config_to_dict(config: ExperimentConfig) -> dict:
    return asdict(config)
