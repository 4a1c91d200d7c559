"""Command-line entry point.

Exit codes: 0 success, 1 hard failure, 2 partial success (some graphs
were skipped and recorded in the run log).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ApichainError
from .pipeline import (
    PipelineConfig,
    cmd_cluster_classes,
    cmd_crossval,
    cmd_eval,
    cmd_featurize,
    cmd_predict,
    cmd_temporal,
    cmd_train,
)
from .synth import SynthSpec, generate_corpus

CONFIG_OVERRIDES = (
    ("--mode", "mode", str, "abstraction mode: family|package|class"),
    ("--strategy", "strategy", str, "edge-multiset|path-enumeration"),
    ("--featurizer", "featurizer", str, "markov|fam"),
    ("--seed", "seed", int, "global random seed"),
    ("--workers", "workers", int, "worker processes (env APICHAIN_WORKERS overrides)"),
    ("--classifier", "classifier", str, "random-forest|1nn|3nn"),
    ("--trees", "trees", int, "forest size override"),
    ("--depth", "depth", int, "forest depth override"),
    ("--pca", "pca_components", int, "PCA component count"),
    ("--clustering", "clustering", str, "class clustering CSV"),
    ("--adlibs", "adlibs", str, "ad-library prefix list file"),
    ("--packages", "packages", str, "package whitelist file (or 'builtin')"),
    ("--classes", "classes", str, "class whitelist file (or 'builtin')"),
)


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="INI config file; flags override keys")
    for flag, dest, typ, help_text in CONFIG_OVERRIDES:
        parser.add_argument(flag, dest=dest, type=typ, default=None, help=help_text)


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    overrides = {dest: getattr(args, dest) for _, dest, _, _ in CONFIG_OVERRIDES}
    if args.config:
        return PipelineConfig.from_ini(args.config, overrides)
    cfg = PipelineConfig()
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    cfg.__post_init__()
    return cfg


def _print_report_file(path: Path) -> None:
    if path.suffix == ".json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        status = doc.get("status", "ok")
        print(f"status: {status}")
        if status != "ok":
            print(f"reason: {doc.get('reason', '')}")
        for r in doc.get("reports", []):
            print(
                f"{r['experiment']}: P={r['precision']:.4f} R={r['recall']:.4f} "
                f"F={r['f_measure']:.4f} (tp={r['tp']} fp={r['fp']} tn={r['tn']} fn={r['fn']})"
            )
    else:
        print(path.read_text(encoding="utf-8"), end="")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apichain",
        description="Markov-chain behavioral malware classification over abstracted API calls",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("featurize", help="manifest of call graphs -> feature matrix")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="output .csv or .npy")
    _add_config_args(p)

    p = sub.add_parser("train", help="feature matrix -> trained model")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("predict", help="model + features -> predictions CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="model + labeled features -> report")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="report base path (writes .csv and .json)")
    _add_config_args(p)

    p = sub.add_parser("crossval", help="10-fold cross-validation report")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--folds", type=int, default=10)
    _add_config_args(p)

    p = sub.add_parser("temporal", help="train/test across year tags")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    _add_config_args(p)

    p = sub.add_parser("cluster-classes", help="build the class clustering")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--k", type=int, default=400)
    _add_config_args(p)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--name", default="synth")
    p.add_argument("--apps-per-class", type=int, default=50)
    p.add_argument("--years", default="2013", help="comma-separated 4-digit years")
    p.add_argument("--nodes", default="20:60", help="min:max nodes per app")
    p.add_argument("--divergence", type=float, default=1.0)
    p.add_argument("--drift", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("report", help="pretty-print a report file")
    p.add_argument("--path", required=True)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "featurize":
            result = cmd_featurize(args.manifest, _build_config(args), args.out)
            print(
                f"featurized {result.featurized} apps "
                f"({len(result.skipped)} skipped) -> {result.out_path}"
            )
            return 2 if result.skipped else 0
        if args.verb == "train":
            out = cmd_train(args.features, _build_config(args), args.out)
            print(f"model written to {out}")
            return 0
        if args.verb == "predict":
            out = cmd_predict(args.model, args.features, args.out)
            print(f"predictions written to {out}")
            return 0
        if args.verb == "eval":
            csv_path, json_path = cmd_eval(args.model, args.features, _build_config(args), args.out)
            _print_report_file(json_path)
            return 0
        if args.verb == "crossval":
            csv_path, json_path = cmd_crossval(
                args.features, _build_config(args), args.out, folds=args.folds
            )
            _print_report_file(json_path)
            return 0
        if args.verb == "temporal":
            csv_path, json_path = cmd_temporal(args.features, _build_config(args), args.out)
            _print_report_file(json_path)
            return 0
        if args.verb == "cluster-classes":
            out, skipped = cmd_cluster_classes(
                args.manifest, _build_config(args), args.out, k=args.k
            )
            print(f"clustering written to {out} ({len(skipped)} graphs skipped)")
            return 2 if skipped else 0
        if args.verb == "synth":
            lo, _, hi = args.nodes.partition(":")
            spec = SynthSpec(
                name=args.name,
                apps_per_class=args.apps_per_class,
                years=tuple(int(y) for y in args.years.split(",")),
                nodes_min=int(lo),
                nodes_max=int(hi or lo),
                divergence=args.divergence,
                drift=args.drift,
                seed=args.seed,
            )
            manifest = generate_corpus(spec, args.out)
            print(f"manifest written to {manifest}")
            return 0
        if args.verb == "report":
            _print_report_file(Path(args.path))
            return 0
    except ApichainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
