"""Experiment harness: run stratifiers over datasets, audit the folds and
aggregate results into average-rank tables and CSV reports.

Configs are INI files with one ``[experiment]`` section and one
``[dataset:<name>]`` section per input; every output byte is determined by
the config and its seeds.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean
from typing import IO, Sequence, Union

from scipy.stats import rankdata

from .dataset import FoldAssignment, MultiLabelDataset
from .errors import ParseError
from .graph import build_graph, network_characteristics
from .io import read_dataset, write_folds
from .metrics import FoldStats, fold_stats
from .stratifiers import METHODS, StratifierConfig, split

STAT_MEASURES = (
    "ld",
    "lpd",
    "ed",
    "fz",
    "flz",
    "flpz",
    "pair_miss_mean",
    "pair_miss_std",
)

NETWORK_COLUMNS = (
    "train_q_mean",
    "train_q_std",
    "train_count_std",
    "train_mean_size_std",
    "test_count_std",
    "test_mean_size_std",
    "unique_communities",
    "unique_partitions",
    "matched_partitions",
    "q_diff_mean",
    "q_diff_std",
)


@dataclass(frozen=True)
class DatasetEntry:
    """One input dataset: where it lives and how to locate its labels."""

    name: str
    path: str
    fmt: str = "canonical"
    label_count: int | None = None
    labels_at_end: bool = True
    label_names: tuple[str, ...] | None = None

    def load(self) -> MultiLabelDataset:
        return read_dataset(
            self.path,
            self.fmt,
            label_count=self.label_count,
            labels_at_end=self.labels_at_end,
            label_names=list(self.label_names) if self.label_names else None,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetEntry, ...]
    methods: tuple[str, ...]
    k: int
    seeds: tuple[int, ...] = (0,)
    measures: tuple[str, ...] = STAT_MEASURES
    network: bool = False
    shuffle: bool = False
    higher_better: tuple[str, ...] = ()
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ParseError(f"k must be >= 2, got {self.k}")
        if not self.datasets:
            raise ParseError("config lists no datasets")
        if not self.methods:
            raise ParseError("config lists no methods")
        if not self.seeds:
            raise ParseError("config lists no seeds")
        if not self.measures:
            raise ParseError("config lists no measures")
        for m in self.methods:
            if m not in METHODS:
                raise ParseError(f"unknown method {m!r}, expected one of {METHODS}")
        for m in self.measures:
            if m not in STAT_MEASURES:
                raise ParseError(
                    f"unknown measure {m!r}, expected one of {STAT_MEASURES}"
                )
        names = [d.name for d in self.datasets]
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate dataset names in {names}")

    def semantic_dict(self) -> dict:
        """The fields that define the experiment (output location excluded)."""
        return {
            "datasets": [
                {
                    "name": d.name,
                    "path": d.path,
                    "format": d.fmt,
                    "label_count": d.label_count,
                    "labels_at_end": d.labels_at_end,
                    "label_names": list(d.label_names) if d.label_names else None,
                }
                for d in self.datasets
            ],
            "methods": list(self.methods),
            "k": self.k,
            "seeds": list(self.seeds),
            "measures": list(self.measures),
            "network": self.network,
            "shuffle": self.shuffle,
            "higher_better": list(self.higher_better),
        }


def config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(cfg.semantic_dict(), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _split_list(raw: str) -> list[str]:
    return [tok for tok in raw.replace(",", " ").split() if tok]


def load_config(source: Union[str, Path, IO[str]]) -> ExperimentConfig:
    """Parse an experiment config INI file."""
    parser = configparser.ConfigParser()
    try:
        if isinstance(source, (str, Path)):
            text = Path(source).read_text(encoding="utf-8")
        else:
            text = source.read()
        parser.read_string(text)
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ParseError(f"malformed config: {exc}") from None

    if "experiment" not in parser:
        raise ParseError("config needs an [experiment] section")
    exp = parser["experiment"]
    try:
        k = exp.getint("k", fallback=None)
        network = exp.getboolean("network", fallback=False)
        shuffle = exp.getboolean("shuffle", fallback=False)
    except ValueError as exc:
        raise ParseError(f"bad [experiment] value: {exc}") from None
    if k is None:
        raise ParseError("[experiment] must set k")
    methods = tuple(_split_list(exp.get("methods", "")))
    try:
        seeds = tuple(int(s) for s in _split_list(exp.get("seeds", "0")))
    except ValueError as exc:
        raise ParseError(f"bad seed: {exc}") from None
    measures = tuple(_split_list(exp.get("measures", " ".join(STAT_MEASURES))))
    higher = tuple(_split_list(exp.get("higher_better", "")))
    output_dir = exp.get("output", fallback=None)

    entries = []
    for section in parser.sections():
        if not section.startswith("dataset:"):
            if section != "experiment":
                raise ParseError(f"unknown config section [{section}]")
            continue
        name = section.split(":", 1)[1].strip()
        sec = parser[section]
        if "path" not in sec:
            raise ParseError(f"[{section}] must set path")
        label_count = sec.getint("labels", fallback=None)
        labels_at = sec.get("labels_at", fallback="end").strip().lower()
        if labels_at not in ("end", "start"):
            raise ParseError(f"[{section}] labels_at must be 'end' or 'start'")
        label_names = sec.get("label_names", fallback=None)
        entries.append(
            DatasetEntry(
                name=name,
                path=sec["path"],
                fmt=sec.get("format", fallback="canonical").strip().lower(),
                label_count=label_count,
                labels_at_end=labels_at == "end",
                label_names=tuple(_split_list(label_names)) if label_names else None,
            )
        )
    return ExperimentConfig(
        datasets=tuple(entries),
        methods=methods,
        k=k,
        seeds=seeds,
        measures=measures,
        network=network,
        shuffle=shuffle,
        higher_better=higher,
        output_dir=output_dir,
    )


@dataclass
class RunBundle:
    """Everything one experiment run produced, pre-serialization."""

    config: ExperimentConfig
    metric_rows: list[dict] = field(default_factory=list)
    network_rows: list[dict] = field(default_factory=list)
    assignments: dict[tuple[str, str, int], FoldAssignment] = field(
        default_factory=dict
    )
    entry_status: dict[str, str] = field(default_factory=dict)  # name -> "ok"/error

    @property
    def failed(self) -> list[str]:
        return [n for n, s in self.entry_status.items() if s != "ok"]

    def succeeded_datasets(self) -> list[str]:
        return [d.name for d in self.config.datasets if self.entry_status[d.name] == "ok"]


def _audit_one(
    d: MultiLabelDataset,
    entry: DatasetEntry,
    method: str,
    seed: int,
    cfg: ExperimentConfig,
) -> tuple[FoldAssignment, FoldStats, list[dict]]:
    scfg = StratifierConfig(
        k=cfg.k, seed=seed, method=method, shuffle=cfg.shuffle
    )
    assignment = split(d, scfg)
    stats = fold_stats(d, assignment)
    net_rows: list[dict] = []
    if cfg.network:
        for weighted, tag in ((False, "unweighted"), (True, "weighted")):
            train_graphs = [
                build_graph(d.subset(assignment.train_indices(j)), weighted)
                for j in range(cfg.k)
            ]
            test_graphs = [
                build_graph(d.subset(assignment.test_indices(j)), weighted)
                for j in range(cfg.k)
            ]
            report = network_characteristics(train_graphs, test_graphs)
            net_rows.append(
                {
                    "dataset": entry.name,
                    "method": method,
                    "seed": seed,
                    "graph": tag,
                    **report.measures(),
                }
            )
    return assignment, stats, net_rows


def run_experiment(cfg: ExperimentConfig) -> RunBundle:
    """Run every (dataset, method, seed) combination.

    A failure inside one dataset entry aborts that entry, records the error
    and moves on; other entries still run.
    """
    bundle = RunBundle(config=cfg)
    for entry in cfg.datasets:
        try:
            d = entry.load()
            rows: list[dict] = []
            nets: list[dict] = []
            assignments: dict[tuple[str, str, int], FoldAssignment] = {}
            for method in cfg.methods:
                for seed in cfg.seeds:
                    assignment, stats, net_rows = _audit_one(
                        d, entry, method, seed, cfg
                    )
                    assignments[(entry.name, method, seed)] = assignment
                    rows.append(
                        {
                            "dataset": entry.name,
                            "method": method,
                            "seed": seed,
                            **stats.measures(),
                        }
                    )
                    nets.extend(net_rows)
        except (ParseError, OSError, ValueError) as exc:
            bundle.entry_status[entry.name] = f"{type(exc).__name__}: {exc}"
            continue
        bundle.metric_rows.extend(rows)
        bundle.network_rows.extend(nets)
        bundle.assignments.update(assignments)
        bundle.entry_status[entry.name] = "ok"
    return bundle


@dataclass(frozen=True)
class RankTable:
    """Average rank of each method per measure, 1 = best, ties averaged."""

    measures: tuple[str, ...]
    methods: tuple[str, ...]
    average: dict[tuple[str, str], float]  # (measure, method) -> mean rank
    per_dataset: dict[tuple[str, str, str], float]  # (measure, dataset, method) -> rank


def average_ranks(
    raw: dict[str, dict[str, dict[str, float]]],
    higher_better: Sequence[str] = (),
) -> RankTable:
    """Rank methods per dataset and average the ranks across datasets.

    `raw[measure][dataset][method]` holds the raw values. All measures rank
    lower-is-better unless listed in `higher_better`. Every (dataset, method)
    cell must be present.
    """
    measures = tuple(raw)
    if not measures:
        raise ParseError("no measures to rank")
    seen: dict[str, None] = {}
    for datasets in raw.values():
        for cells in datasets.values():
            for m in cells:
                seen.setdefault(m)
    methods = tuple(seen)
    average: dict[tuple[str, str], float] = {}
    per_dataset: dict[tuple[str, str, str], float] = {}
    for measure in measures:
        datasets = raw[measure]
        if not datasets:
            raise ParseError(f"measure {measure!r} has no datasets")
        for dataset, cells in datasets.items():
            missing = [m for m in methods if m not in cells]
            if missing:
                raise ParseError(
                    f"missing value for measure {measure!r}, dataset {dataset!r}, "
                    f"method(s) {missing}"
                )
        sums = {m: 0.0 for m in methods}
        for dataset, cells in datasets.items():
            values = [float(cells[m]) for m in methods]
            if measure in higher_better:
                values = [-v for v in values]
            ranks = rankdata(values, method="average")
            for m, r in zip(methods, ranks):
                sums[m] += r
                per_dataset[(measure, dataset, m)] = float(r)
        for m in methods:
            average[(measure, m)] = sums[m] / len(datasets)
    return RankTable(measures, methods, average, per_dataset)


def _write_csv(path: Path, header: Sequence[str], rows: list[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(str(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_report(bundle: RunBundle, out_dir: str | Path) -> dict:
    """Write fold files, CSV reports and the run manifest; returns the manifest."""
    cfg = bundle.config
    out = Path(out_dir)
    folds_dir = out / "folds"
    folds_dir.mkdir(parents=True, exist_ok=True)

    for (dataset, method, seed), assignment in bundle.assignments.items():
        write_folds(assignment, folds_dir / f"{dataset}__{method}__s{seed}.json")

    header = ["dataset", "method", "seed", *STAT_MEASURES]
    _write_csv(
        out / "metrics.csv",
        header,
        [[row[c] for c in header] for row in bundle.metric_rows],
    )
    net_header = ["dataset", "method", "seed", "graph", *NETWORK_COLUMNS]
    _write_csv(
        out / "network.csv",
        net_header,
        [[row[c] for c in net_header] for row in bundle.network_rows],
    )

    # Long format: one (dataset, method, seed, measure, value) row per cell.
    long_rows: list[Sequence] = []
    for row in bundle.metric_rows:
        for measure in cfg.measures:
            long_rows.append(
                [row["dataset"], row["method"], row["seed"], measure, row[measure]]
            )
    for row in bundle.network_rows:
        prefix = "net_w_" if row["graph"] == "weighted" else "net_u_"
        for measure in NETWORK_COLUMNS:
            long_rows.append(
                [
                    row["dataset"],
                    row["method"],
                    row["seed"],
                    prefix + measure,
                    row[measure],
                ]
            )
    _write_csv(
        out / "long.csv", ["dataset", "method", "seed", "measure", "value"], long_rows
    )

    # Ranks over per-dataset means across seeds; failed entries are excluded.
    ok = set(bundle.succeeded_datasets())
    collected: dict[str, dict[str, dict[str, list[float]]]] = {
        m: {} for m in cfg.measures
    }
    for row in bundle.metric_rows:
        if row["dataset"] not in ok:
            continue
        for measure in cfg.measures:
            cells = collected[measure].setdefault(row["dataset"], {})
            cells.setdefault(row["method"], []).append(row[measure])
    rank_rows: list[Sequence] = []
    if ok:
        averaged = {
            measure: {
                dataset: {m: fmean(vals) for m, vals in cells.items()}
                for dataset, cells in datasets.items()
            }
            for measure, datasets in collected.items()
        }
        table = average_ranks(averaged, cfg.higher_better)
        for measure in cfg.measures:
            for method in cfg.methods:
                rank_rows.append([measure, method, table.average[(measure, method)]])
    _write_csv(out / "ranks.csv", ["measure", "method", "avg_rank"], rank_rows)

    manifest = {
        "config_hash": config_hash(cfg),
        "config": cfg.semantic_dict(),
        "entries": [
            {"name": d.name, "status": bundle.entry_status[d.name]}
            for d in cfg.datasets
        ],
        "n_metric_rows": len(bundle.metric_rows),
        "n_network_rows": len(bundle.network_rows),
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest
