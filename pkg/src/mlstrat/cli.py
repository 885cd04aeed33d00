"""Command line interface.

Subcommands: ``split`` (stratify one dataset into a fold file), ``audit``
(fold-quality measures for an existing fold file), ``graph`` (per-fold label
co-occurrence communities and their stability) and ``bench`` (full experiment
from a config file). Exit codes: 0 success, 1 input error, 2 invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import STAT_MEASURES, emit_report, load_config, run_experiment
from .errors import FoldValidationError, ParseError
from .graph import build_graph, fastgreedy_communities, network_characteristics, partition_to_lists
from .io import read_dataset, read_folds, write_folds
from .metrics import fold_stats
from .stratifiers import METHODS, StratifierConfig, split


def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="dataset file")
    parser.add_argument(
        "--format",
        choices=("arff", "canonical"),
        default="canonical",
        help="input format (default: canonical)",
    )
    parser.add_argument(
        "--labels", type=int, default=None, help="number of label attributes (ARFF)"
    )
    parser.add_argument(
        "--labels-at-start",
        action="store_true",
        help="label attributes lead the ARFF attribute list instead of trailing it",
    )
    parser.add_argument(
        "--label-names",
        nargs="+",
        default=None,
        help="select ARFF label attributes by name instead of position",
    )


def _load_dataset(args: argparse.Namespace):
    return read_dataset(
        args.input,
        args.format,
        label_count=args.labels,
        labels_at_end=not args.labels_at_start,
        label_names=args.label_names,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlstrat",
        description="Stratify multi-label datasets into k folds and audit the result.",
    )
    parser.add_argument("--version", action="version", version=f"mlstrat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_split = sub.add_parser("split", help="assign samples to folds")
    _add_dataset_args(p_split)
    p_split.add_argument("--method", choices=METHODS, required=True)
    p_split.add_argument("--folds", type=int, required=True, help="fold count k")
    p_split.add_argument("--seed", type=int, default=0)
    p_split.add_argument(
        "--shuffle", action="store_true", help="shuffle before windowing (kfold)"
    )
    p_split.add_argument("--output", required=True, help="fold JSON destination")

    p_audit = sub.add_parser("audit", help="fold-quality measures for a fold file")
    _add_dataset_args(p_audit)
    p_audit.add_argument("--folds", required=True, help="fold JSON produced by split")
    p_audit.add_argument(
        "--output", default=None, help="write the CSV here instead of stdout"
    )

    p_graph = sub.add_parser(
        "graph", help="per-fold co-occurrence communities and stability"
    )
    _add_dataset_args(p_graph)
    p_graph.add_argument("--folds", required=True, help="fold JSON produced by split")
    p_graph.add_argument(
        "--weighted", action="store_true", help="weight edges by co-occurrence counts"
    )
    p_graph.add_argument("--output", required=True, help="output directory")

    p_bench = sub.add_parser("bench", help="run a configured experiment")
    p_bench.add_argument("--config", required=True, help="experiment config INI file")
    p_bench.add_argument(
        "--out",
        default=None,
        help="output directory (defaults to the config's output key)",
    )
    return parser


def _cmd_split(args: argparse.Namespace) -> int:
    d = _load_dataset(args)
    cfg = StratifierConfig(
        k=args.folds,
        seed=args.seed,
        method=args.method,
        shuffle=args.shuffle,
    )
    assignment = split(d, cfg)
    write_folds(assignment, args.output)
    sizes = assignment.fold_sizes()
    print(f"wrote {args.output}: method={args.method} k={args.folds} sizes={sizes}")
    return 0


def _check_folds_match(d, assignment) -> None:
    if assignment.n_samples != d.n_samples:
        raise FoldValidationError(
            f"fold file covers {assignment.n_samples} samples, "
            f"dataset has {d.n_samples}"
        )


def _cmd_audit(args: argparse.Namespace) -> int:
    d = _load_dataset(args)
    assignment = read_folds(args.folds)
    _check_folds_match(d, assignment)
    stats = fold_stats(d, assignment)
    header = ["method", "seed", "k", *STAT_MEASURES]
    values = [assignment.method, assignment.seed, assignment.k]
    values.extend(stats.measures()[m] for m in STAT_MEASURES)
    text = ",".join(header) + "\n" + ",".join(str(v) for v in values) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_graph(args: argparse.Namespace) -> int:
    d = _load_dataset(args)
    assignment = read_folds(args.folds)
    _check_folds_match(d, assignment)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    train_graphs = [
        build_graph(d.subset(assignment.train_indices(j)), args.weighted)
        for j in range(assignment.k)
    ]
    test_graphs = [
        build_graph(d.subset(assignment.test_indices(j)), args.weighted)
        for j in range(assignment.k)
    ]
    folds_out = []
    for j in range(assignment.k):
        train_p, train_q = fastgreedy_communities(train_graphs[j])
        test_p, test_q = fastgreedy_communities(test_graphs[j])
        folds_out.append(
            {
                "fold": j,
                "train_communities": partition_to_lists(train_p),
                "train_q": train_q,
                "test_communities": partition_to_lists(test_p),
                "test_q": test_q,
            }
        )
    (out / "partitions.json").write_text(
        json.dumps({"weighted": args.weighted, "folds": folds_out}, indent=2) + "\n",
        encoding="utf-8",
    )
    report = network_characteristics(train_graphs, test_graphs)
    measures = report.measures()
    text = (
        ",".join(measures) + "\n" + ",".join(str(v) for v in measures.values()) + "\n"
    )
    (out / "network.csv").write_text(text, encoding="utf-8")
    print(f"wrote {out / 'partitions.json'} and {out / 'network.csv'}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    out_dir = args.out or cfg.output_dir
    if out_dir is None:
        raise ParseError("no output directory: pass --out or set output in the config")
    bundle = run_experiment(cfg)
    manifest = emit_report(bundle, out_dir)
    for entry in manifest["entries"]:
        print(f"{entry['name']}: {entry['status']}")
    print(f"report written to {out_dir}")
    return 1 if bundle.failed else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "split": _cmd_split,
        "audit": _cmd_audit,
        "graph": _cmd_graph,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except FoldValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
