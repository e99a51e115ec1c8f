"""Tests for dataset generation, seeding, and the sweep orchestration."""

import numpy as np
import pytest

from modrec.channel import snr_gain
from modrec.features import write_features_csv
from modrec.harness import (ALL_MODULATIONS, CPFSK_MODULATIONS,
                            ExperimentConfig, LINEAR_MODULATIONS, PRESETS,
                            RealizationParams, SweepResult, generate_dataset,
                            make_realization, modulation_label,
                            preset_config, realization_seed, run_sweep,
                            trainer_seed, train_classifier)


def _tiny_config(**kw):
    base = dict(modulations=("BFSK", "QAM16"), n_per_modulation=10,
                n_symbols=40, snr_grid_db=(0.0, 20.0), training_sizes=(4,),
                classifiers=("LR",), master_seed=7)
    base.update(kw)
    return ExperimentConfig(**base)


class TestConfig:
    def test_training_size_must_fit(self):
        with pytest.raises(ValueError):
            _tiny_config(training_sizes=(10,))
        with pytest.raises(ValueError):
            _tiny_config(training_sizes=(0,))

    def test_unknown_modulation(self):
        with pytest.raises(ValueError):
            _tiny_config(modulations=("QAM64",))

    def test_presets(self):
        assert preset_config("paper").n_per_modulation == 10000
        desk = preset_config("desk")
        assert desk.n_symbols == 600
        assert max(desk.training_sizes) < desk.n_per_modulation
        ci = preset_config("ci")
        assert max(ci.training_sizes) < ci.n_per_modulation
        with pytest.raises(ValueError):
            preset_config("nope")

    def test_preset_overrides(self):
        cfg = preset_config("ci", master_seed=9, classifiers=("SVM",))
        assert cfg.master_seed == 9 and cfg.classifiers == ("SVM",)


class TestSeeds:
    def test_realization_seeds_unique(self):
        seeds = {realization_seed(1, mod, idx, snr)
                 for mod in ALL_MODULATIONS
                 for idx in range(50)
                 for snr in (-10.0, 0.0, 10.0)}
        assert len(seeds) == 7 * 50 * 3

    def test_depends_on_all_parts(self):
        base = realization_seed(1, "BFSK", 0, 0.0)
        assert realization_seed(2, "BFSK", 0, 0.0) != base
        assert realization_seed(1, "FSK4", 0, 0.0) != base
        assert realization_seed(1, "BFSK", 1, 0.0) != base
        assert realization_seed(1, "BFSK", 0, 5.0) != base

    def test_trainer_seeds_disjoint_from_realizations(self):
        r = {realization_seed(3, mod, idx, 5.0)
             for mod in ALL_MODULATIONS for idx in range(200)}
        t = {trainer_seed(3, clf, size, 5.0)
             for clf in ("SVM", "LR", "NN") for size in (50, 1000, 2000)}
        assert not r & t


class TestMakeRealization:
    def test_deterministic(self):
        a, pa = make_realization("PSK8", 5.0, 123, n_symbols=50)
        b, pb = make_realization("PSK8", 5.0, 123, n_symbols=50)
        np.testing.assert_array_equal(a, b)
        assert pa == pb

    def test_sample_count(self):
        r, p = make_realization("BPSK", 10.0, 5, n_symbols=80)
        assert r.size == p.n_samples
        assert p.n_samples == int(np.floor(80 * (p.ns + p.eps)))

    def test_draw_ranges(self):
        for seed in range(30):
            _, p = make_realization("FSK4", 0.0, seed, n_symbols=20)
            assert p.rolloff in [k / 10 for k in range(1, 11)]
            assert 0 <= p.eps < 1 and 0 <= p.eps0 < 1
            assert abs(p.delta_prime) <= np.pi / 20
            assert 0 <= p.k0 <= int(np.ceil(p.ns + p.eps)) - 1

    def test_unknown_modulation(self):
        with pytest.raises(ValueError):
            make_realization("GMSK", 0.0, 1)

    def test_noiseless_mode(self):
        r, p = make_realization("BFSK", None, 77, n_symbols=30)
        # noiseless CPFSK keeps |s| = alpha exactly
        np.testing.assert_allclose(np.abs(r), p.alpha, atol=1e-12)


class TestGenerateDataset:
    def test_row_counting_and_order(self):
        cfg = _tiny_config()
        rows = generate_dataset(cfg, 0.0)
        assert len(rows) == 20
        assert [r.modulation for r in rows[:10]] == ["BFSK"] * 10
        assert [r.modulation for r in rows[10:]] == ["QAM16"] * 10
        assert all(r.label == modulation_label(r.modulation) for r in rows)
        assert all(r.snr_db == 0.0 for r in rows)

    def test_labels(self):
        for mod in CPFSK_MODULATIONS:
            assert modulation_label(mod) == 1
        for mod in LINEAR_MODULATIONS:
            assert modulation_label(mod) == 0

    def test_determinism_bytes(self, tmp_path):
        cfg = _tiny_config()
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_features_csv(p1, generate_dataset(cfg, 20.0))
        write_features_csv(p2, generate_dataset(cfg, 20.0))
        assert p1.read_bytes() == p2.read_bytes()

    def test_workers_do_not_change_results(self, tmp_path):
        cfg = _tiny_config()
        serial = generate_dataset(cfg, 0.0, workers=1)
        parallel = generate_dataset(cfg, 0.0, workers=3)
        assert serial == parallel

    def test_errors_carry_realization_provenance(self):
        from modrec.harness import _feature_row
        with pytest.raises(RuntimeError, match="GMSK.*snr_db=5.*seed=77"):
            _feature_row(("GMSK", 5.0, 77, 30, 6, 0.5))

    def test_seed_column_replays_realization(self):
        cfg = _tiny_config()
        rows = generate_dataset(cfg, 20.0)
        row = rows[3]
        from modrec.features import extract_features
        r, _ = make_realization(row.modulation, row.snr_db, row.seed,
                                n_symbols=cfg.n_symbols, ns=cfg.ns,
                                h=cfg.h)
        f1, f2, f3 = extract_features(r)
        assert (f1, f2, f3) == (row.f1, row.f2, row.f3)


class TestSweep:
    def test_grid_coverage_and_shape(self):
        cfg = _tiny_config(snr_grid_db=(0.0, 10.0, 20.0))
        result = run_sweep(cfg)
        assert len(result.rows) == 3  # 1 classifier x 1 size x 3 SNRs
        keys = {(r.classifier, r.training_size, r.snr_db)
                for r in result.rows}
        assert len(keys) == 3
        for r in result.rows:
            assert 0.0 <= r.accuracy <= 1.0
            assert r.n_test == 2 * (10 - 4)
            assert r.seed == cfg.master_seed

    def test_csv_format(self, tmp_path):
        cfg = _tiny_config()
        result = run_sweep(cfg)
        path = tmp_path / "results.csv"
        result.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "classifier,training_size,snr_db,accuracy,n_test,seed"
        assert len(lines) == 1 + len(result.rows)

    def test_high_snr_beats_low_snr(self):
        # easy separation at 20 dB vs near-chance at very low SNR
        cfg = _tiny_config(modulations=ALL_MODULATIONS, n_per_modulation=30,
                           n_symbols=100, snr_grid_db=(-10.0, 20.0),
                           training_sizes=(15,), classifiers=("LR",))
        res = run_sweep(cfg)
        low = res.get("LR", 15, -10.0).accuracy
        high = res.get("LR", 15, 20.0).accuracy
        assert high >= low

    def test_get_missing_row(self):
        res = SweepResult()
        with pytest.raises(KeyError):
            res.get("LR", 10, 0.0)


class TestClassSeparationDirection:
    def test_f1_normalized_by_fading_separates_classes(self):
        # At high SNR the pi/2-centered lag-product mean is
        # cos(residual offset) times the lag-1 pulse autocorrelation for
        # PSK/QAM (~0.94-0.96 over the roll-off grid) and times
        # prod cos(Q_m) for CPFSK (~0.97-0.99), so after removing the
        # per-realization fading scale alpha^2 g^2 the CPFSK class sits
        # strictly above the linear class.
        g2 = snr_gain(30.0) ** 2
        per = 60
        by_class = {0: [], 1: []}
        for mod in ALL_MODULATIONS:
            for idx in range(per):
                seed = realization_seed(11, mod, idx, 30.0)
                r, info = make_realization(mod, 30.0, seed, n_symbols=300)
                w_mean = np.mean((r[1:] * np.conj(r[:-1])).real)
                by_class[modulation_label(mod)].append(
                    w_mean / (info.alpha ** 2 * g2))
        cp = np.asarray(by_class[1])
        ln = np.asarray(by_class[0])
        se = np.sqrt(cp.var(ddof=1) / cp.size + ln.var(ddof=1) / ln.size)
        assert (cp.mean() - ln.mean()) / se >= 5.0


class TestTrainClassifier:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            train_classifier("FOREST", np.ones((4, 3)), np.array([0, 1, 0, 1]))

    def test_end_to_end_high_snr(self):
        cfg = _tiny_config(modulations=ALL_MODULATIONS, n_per_modulation=40,
                           n_symbols=150, training_sizes=(20,))
        rows = generate_dataset(cfg, 20.0)
        from modrec.features import feature_matrix
        from modrec.harness import _split_by_size, evaluate_classifier
        train_rows, test_rows = _split_by_size(rows, cfg, 20)
        x_tr, y_tr = feature_matrix(train_rows)
        x_te, y_te = feature_matrix(test_rows)
        for kind in ("SVM", "LR", "NN"):
            model = train_classifier(kind, x_tr, y_tr, seed=1)
            acc = evaluate_classifier(model, x_te, y_te)
            assert acc >= 0.8, (kind, acc)


def test_realization_params_roundtrip_fields():
    _, p = make_realization("QAM16", 5.0, 99, n_symbols=25)
    assert isinstance(p, RealizationParams)
    for field in ("modulation", "seed", "snr_db", "n_symbols", "ns", "h",
                  "rolloff", "eps", "eps0", "k0", "alpha", "psi", "theta_c",
                  "delta_prime", "n_samples"):
        assert hasattr(p, field)
