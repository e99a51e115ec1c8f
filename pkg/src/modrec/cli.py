"""Command-line interface.

Subcommands: generate, train, evaluate, sweep, oracle-check, export-iq.
Exit codes: 0 success, 1 usage error, 2 data/validation error,
3 oracle-check failure.

Experiment settings come from (lowest to highest precedence) preset,
TOML config file, and command-line flags of the same name.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import classifiers as clf
from . import harness, iqio, oracle
from .features import feature_matrix, read_features_csv, write_features_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ORACLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class DataError(Exception):
    pass


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


def _str_list(text: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _add_config_options(p: argparse.ArgumentParser, seed_required: bool):
    p.add_argument("--config", help="TOML file with experiment settings")
    p.add_argument("--preset", choices=sorted(harness.PRESETS),
                   help="named parameter preset")
    p.add_argument("--modulations", type=_str_list, metavar="M1,M2,...")
    p.add_argument("--n-per-modulation", type=int)
    p.add_argument("--n-symbols", type=int)
    p.add_argument("--ns", type=int)
    p.add_argument("--h", type=float)
    p.add_argument("--snr-grid-db", type=_float_list, metavar="S1,S2,...")
    p.add_argument("--training-sizes", type=_int_list, metavar="N1,N2,...")
    p.add_argument("--classifiers", type=_str_list, metavar="C1,C2,...")
    p.add_argument("--seed", type=int, dest="master_seed",
                   help="master seed" + (" (required unless set in the "
                                         "config file)" if seed_required
                                         else ""))
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers for realization synthesis")


def _build_config(args, seed_required: bool) -> harness.ExperimentConfig:
    settings: dict = {}
    if args.preset:
        settings.update(harness.PRESETS[args.preset])
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                file_settings = tomllib.load(fh)
        except OSError as exc:
            raise DataError(f"cannot read config file: {exc}")
        except tomllib.TOMLDecodeError as exc:
            raise DataError(f"bad TOML in {args.config}: {exc}")
        known = {f.name for f in fields(harness.ExperimentConfig)}
        unknown = set(file_settings) - known
        if unknown:
            raise DataError(f"unknown config keys {sorted(unknown)}")
        for key, value in file_settings.items():
            settings[key] = tuple(value) if isinstance(value, list) else value
    for key in ("modulations", "n_per_modulation", "n_symbols", "ns", "h",
                "snr_grid_db", "training_sizes", "classifiers",
                "master_seed", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if seed_required and "master_seed" not in settings:
        raise UsageError("--seed is required (or master_seed in the config)")
    try:
        return harness.ExperimentConfig(**settings)
    except (TypeError, ValueError) as exc:
        raise DataError(f"invalid configuration: {exc}")


def _cmd_generate(args) -> int:
    config = _build_config(args, seed_required=True)
    snrs = [args.snr_db] if args.snr_db is not None else config.snr_grid_db
    rows = []
    for snr in snrs:
        rows.extend(harness.generate_dataset(config, snr,
                                             workers=args.workers))
    write_features_csv(args.out, rows)
    print(f"wrote {len(rows)} feature rows to {args.out}")
    return EXIT_OK


def _load_features(path):
    try:
        return read_features_csv(path)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot load features from {path}: {exc}")


def _cmd_train(args) -> int:
    rows = _load_features(args.features)
    if args.training_size is not None:
        per_mod: dict[str, int] = {}
        kept = []
        for r in rows:
            per_mod.setdefault(r.modulation, 0)
            if per_mod[r.modulation] < args.training_size:
                per_mod[r.modulation] += 1
                kept.append(r)
        rows = kept
    x, y = feature_matrix(rows)
    kind = args.classifier.upper()
    if kind not in harness.CLASSIFIER_NAMES:
        raise DataError(f"unknown classifier {args.classifier!r}")
    try:
        trained = harness.train_classifier(kind, x, y, seed=args.seed)
    except ValueError as exc:
        raise DataError(str(exc))
    clf.save_model(args.out, trained)
    print(f"trained {kind} on {len(rows)} rows; model saved to {args.out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    try:
        trained = clf.load_model(args.model)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"cannot load model from {args.model}: {exc}")
    rows = _load_features(args.features)
    x, y = feature_matrix(rows)
    acc = harness.evaluate_classifier(trained, x, y)
    print(f"accuracy {acc:.6f} on {len(rows)} rows")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = _build_config(args, seed_required=True)
    result = harness.run_sweep(config, workers=args.workers)
    result.to_csv(args.out)
    print(f"wrote {len(result.rows)} sweep rows to {args.out}")
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    rows = oracle.run_oracle_checks(
        n_realizations=args.realizations, seed=args.seed,
        flip_bfsk_var_sign=args.inject_bug)
    if args.out:
        oracle.write_oracle_report(args.out, rows)
    failures = [r for r in rows if not r.passed]
    print(f"oracle-check: {len(rows) - len(failures)}/{len(rows)} "
          f"checks passed")
    for r in failures:
        print(f"  FAIL {r.formula} k={r.k}: analytic={r.analytic:.6g} "
              f"monte_carlo={r.monte_carlo:.6g} std_err={r.std_err:.3g}")
    return EXIT_ORACLE if failures else EXIT_OK


def _cmd_export_iq(args) -> int:
    if args.modulation not in harness.ALL_MODULATIONS:
        raise DataError(f"unknown modulation {args.modulation!r}")
    samples, info = harness.make_realization(
        args.modulation, args.snr_db, args.seed,
        n_symbols=args.n_symbols, ns=args.ns, h=args.h)
    try:
        iqio.export_realization(args.out, samples, info)
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}")
    print(f"wrote {samples.size} samples to {args.out} "
          f"(+ {iqio.sidecar_path(args.out).name})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modrec",
                     description="modulation-recognition experiment toolkit")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("generate", help="synthesize a labeled feature CSV")
    _add_config_options(p, seed_required=True)
    p.add_argument("--snr-db", type=float, default=None,
                   help="single SNR point (default: the whole grid)")
    p.add_argument("--out", required=True, help="output features CSV")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("train", help="train one classifier on a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--classifier", required=True,
                   help="one of SVM, LR, NN")
    p.add_argument("--training-size", type=int, default=None,
                   help="use only the first N rows per modulation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output model JSON")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="score a model on a feature CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep",
                       help="accuracy over (classifier x size x SNR)")
    _add_config_options(p, seed_required=True)
    p.add_argument("--out", required=True, help="output results CSV")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle-check",
                       help="closed forms vs Monte-Carlo report")
    p.add_argument("--out", default=None, help="report CSV path")
    p.add_argument("--realizations", type=int, default=4000)
    p.add_argument("--seed", type=int, default=20260809)
    p.add_argument("--inject-bug", action="store_true",
                   help=argparse.SUPPRESS)  # test-only mutation switch
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("export-iq", help="write one realization as raw IQ")
    p.add_argument("--modulation", required=True)
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n-symbols", type=int, default=600)
    p.add_argument("--ns", type=int, default=6)
    p.add_argument("--h", type=float, default=0.5)
    p.add_argument("--out", required=True, help="output IQ file")
    p.set_defaults(func=_cmd_export_iq)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
