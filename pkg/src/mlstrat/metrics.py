"""Statistical fold-quality measures.

All measures compare per-fold label evidence against dataset-level targets
and are invariant under fold relabeling. Ratio-based measures clamp zero
denominators to 1 to stay finite when a fold consists entirely of positives;
clamp events are counted in the diagnostics fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import fmean, pstdev
from typing import Sequence

from .dataset import (
    FoldAssignment,
    LabelSetKey,
    MultiLabelDataset,
    enumerate_label_sets,
)


@dataclass(frozen=True)
class FoldStats:
    """The measure set for one (dataset, assignment) pair.

    `fz`, `flz` and `flpz` count folds missing some label, (fold, label)
    misses and (fold, label pair) misses beyond the pigeonhole-inevitable
    minimum. `pair_miss_pct_*` summarise the per-fold fraction of label pairs
    without positive evidence.
    """

    ld: float
    lpd: float
    ed: float
    fz: int
    flz: int
    flpz: int
    pair_miss_pct_mean: float
    pair_miss_pct_std: float
    ld_clamped: int = 0
    lpd_clamped: int = 0
    zero_support_labels: tuple[int, ...] = field(default=())

    def measures(self) -> dict[str, float]:
        """The eight canonical measures, in stable column order."""
        return {
            "ld": self.ld,
            "lpd": self.lpd,
            "ed": self.ed,
            "fz": self.fz,
            "flz": self.flz,
            "flpz": self.flpz,
            "pair_miss_mean": self.pair_miss_pct_mean,
            "pair_miss_std": self.pair_miss_pct_std,
        }


def _check_pair(d: MultiLabelDataset, a: FoldAssignment) -> None:
    if a.n_samples != d.n_samples:
        raise ValueError(
            f"assignment covers {a.n_samples} samples, dataset has {d.n_samples}"
        )


def _fold_members(a: FoldAssignment) -> list[list[int]]:
    return a.folds()


def _ratio_deviation(
    fold_counts: Sequence[int],
    fold_sizes: Sequence[int],
    global_count: int,
    n: int,
) -> tuple[float, int]:
    """Mean over folds of |fold positive/negative ratio - global ratio|.

    Returns (deviation, number of clamped zero denominators).
    """
    clamped = 0
    den = n - global_count
    if den <= 0:
        den = 1
        clamped += 1
    target = global_count / den
    total = 0.0
    for pos, size in zip(fold_counts, fold_sizes):
        d = size - pos
        if d <= 0:
            d = 1
            clamped += 1
        total += abs(pos / d - target)
    return total / len(fold_sizes), clamped


def label_distribution(d: MultiLabelDataset, a: FoldAssignment) -> float:
    """LD: per-label deviation of fold positive/negative ratios from the global ratio.

    Labels with no positive sample anywhere are excluded from the average
    (see :func:`fold_stats` for the diagnostics). Raises on empty folds,
    where the measure is undefined.
    """
    return _label_distribution(d, a)[0]


def _label_distribution(
    d: MultiLabelDataset, a: FoldAssignment
) -> tuple[float, int, tuple[int, ...]]:
    _check_pair(d, a)
    sizes = a.fold_sizes()
    if min(sizes) == 0:
        raise ValueError("empty fold: label distribution is undefined")
    global_counts = [0] * d.n_labels
    fold_counts = [[0] * a.k for _ in range(d.n_labels)]
    for x, labels in enumerate(d.labels_of):
        j = a.fold_of[x]
        for i in labels:
            global_counts[i] += 1
            fold_counts[i][j] += 1
    included = [i for i in range(d.n_labels) if global_counts[i] > 0]
    skipped = tuple(i for i in range(d.n_labels) if global_counts[i] == 0)
    if not included:
        return 0.0, 0, skipped
    total = 0.0
    clamps = 0
    for i in included:
        dev, c = _ratio_deviation(fold_counts[i], sizes, global_counts[i], d.n_samples)
        total += dev
        clamps += c
    return total / len(included), clamps, skipped


def label_pair_distribution(d: MultiLabelDataset, a: FoldAssignment) -> float:
    """LPD: the LD formula over co-occurring label pairs instead of labels.

    A pair is evidenced by samples carrying both of its labels. Defined as 0
    when the dataset has no co-occurring pairs.
    """
    return _label_pair_distribution(d, a)[0]


def _pair_counts(
    d: MultiLabelDataset, a: FoldAssignment, pairs: Sequence[LabelSetKey]
) -> tuple[dict[LabelSetKey, int], dict[LabelSetKey, list[int]]]:
    wanted = set(pairs)
    global_counts = {e: 0 for e in pairs}
    fold_counts = {e: [0] * a.k for e in pairs}
    for x, labels in enumerate(d.labels_of):
        j = a.fold_of[x]
        for p in range(len(labels)):
            for q in range(p + 1, len(labels)):
                e = LabelSetKey(labels[p], labels[q])
                if e in wanted:
                    global_counts[e] += 1
                    fold_counts[e][j] += 1
    return global_counts, fold_counts


def _label_pair_distribution(
    d: MultiLabelDataset, a: FoldAssignment
) -> tuple[float, int]:
    _check_pair(d, a)
    sizes = a.fold_sizes()
    if min(sizes) == 0:
        raise ValueError("empty fold: label pair distribution is undefined")
    pairs = enumerate_label_sets(d, include_singletons=False)
    if not pairs:
        return 0.0, 0
    global_counts, fold_counts = _pair_counts(d, a, pairs)
    total = 0.0
    clamps = 0
    for e in pairs:
        dev, c = _ratio_deviation(fold_counts[e], sizes, global_counts[e], d.n_samples)
        total += dev
        clamps += c
    return total / len(pairs), clamps


def examples_distribution(
    a: FoldAssignment, targets: Sequence[float] | None = None
) -> float:
    """ED: mean absolute deviation of fold sizes from their desired counts.

    `targets` defaults to n * proportions from the assignment itself.
    """
    if targets is None:
        targets = [a.n_samples * rj for rj in a.proportions]
    if len(targets) != a.k:
        raise ValueError(f"{len(targets)} targets for k={a.k} folds")
    sizes = a.fold_sizes()
    return fmean(abs(s - c) for s, c in zip(sizes, targets))


def zero_counts(d: MultiLabelDataset, a: FoldAssignment) -> tuple[int, int, int]:
    """(FZ, FLZ, FLPZ): fold-level evidence misses.

    FZ counts folds missing at least one label, FLZ the (fold, label) misses,
    both over labels with at least one positive sample anywhere. FLPZ counts
    (fold, label pair) misses beyond the inevitable minimum max(0, k - |D^e|)
    that too little pair evidence forces.
    """
    _check_pair(d, a)
    global_counts = [0] * d.n_labels
    fold_counts = [[0] * a.k for _ in range(d.n_labels)]
    for x, labels in enumerate(d.labels_of):
        j = a.fold_of[x]
        for i in labels:
            global_counts[i] += 1
            fold_counts[i][j] += 1
    supported = [i for i in range(d.n_labels) if global_counts[i] > 0]
    flz = 0
    fz = 0
    for j in range(a.k):
        missing = sum(1 for i in supported if fold_counts[i][j] == 0)
        flz += missing
        fz += 1 if missing else 0

    pairs = enumerate_label_sets(d, include_singletons=False)
    flpz = 0
    if pairs:
        pair_global, pair_folds = _pair_counts(d, a, pairs)
        for e in pairs:
            missing_folds = sum(1 for c in pair_folds[e] if c == 0)
            inevitable = max(0, a.k - pair_global[e])
            flpz += max(0, missing_folds - inevitable)
    return fz, flz, flpz


def pair_miss_percentage(
    d: MultiLabelDataset, a: FoldAssignment
) -> tuple[float, float]:
    """Per-fold fraction of co-occurring pairs without positive evidence.

    Returns the mean and the population standard deviation over folds;
    (0, 0) when the dataset has no co-occurring pairs.
    """
    _check_pair(d, a)
    pairs = enumerate_label_sets(d, include_singletons=False)
    if not pairs:
        return 0.0, 0.0
    _, pair_folds = _pair_counts(d, a, pairs)
    fractions = []
    for j in range(a.k):
        missing = sum(1 for e in pairs if pair_folds[e][j] == 0)
        fractions.append(missing / len(pairs))
    return fmean(fractions), pstdev(fractions)


def fold_stats(
    d: MultiLabelDataset,
    a: FoldAssignment,
    targets: Sequence[float] | None = None,
) -> FoldStats:
    """Compute the full measure set for one assignment."""
    ld, ld_clamps, skipped = _label_distribution(d, a)
    lpd, lpd_clamps = _label_pair_distribution(d, a)
    ed = examples_distribution(a, targets)
    fz, flz, flpz = zero_counts(d, a)
    miss_mean, miss_std = pair_miss_percentage(d, a)
    return FoldStats(
        ld=ld,
        lpd=lpd,
        ed=ed,
        fz=fz,
        flz=flz,
        flpz=flpz,
        pair_miss_pct_mean=miss_mean,
        pair_miss_pct_std=miss_std,
        ld_clamped=ld_clamps,
        lpd_clamped=lpd_clamps,
        zero_support_labels=skipped,
    )
