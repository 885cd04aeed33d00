"""Core data model: multi-label datasets, label-set keys, desirability ledgers
and fold assignments shared by the stratifiers and the fold metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence


class LabelSetKey(NamedTuple):
    """A canonical label pair (lo < hi) or singleton (lo == hi).

    Keys sort in (lo, hi) order, which is the canonical enumeration and
    tie-breaking order used everywhere.
    """

    lo: int
    hi: int

    @classmethod
    def make(cls, i: int, j: int) -> "LabelSetKey":
        """Build a key from two label indices in either order."""
        return cls(i, j) if i <= j else cls(j, i)

    @property
    def is_singleton(self) -> bool:
        return self.lo == self.hi

    def labels(self) -> frozenset[int]:
        return frozenset((self.lo, self.hi))


def pair_key(i: int, j: int) -> LabelSetKey:
    """Shorthand for :meth:`LabelSetKey.make`."""
    return LabelSetKey.make(i, j)


@dataclass(frozen=True)
class MultiLabelDataset:
    """A multi-label dataset reduced to its binary label assignments.

    Features are out of scope; only the per-sample label sets matter for
    stratification and fold auditing.

    Parameters
    ----------
    n_labels : int
        Size of the label space. Label indices are 0-based.
    labels_of : sequence of iterables of int
        One entry per sample: the indices of its positive labels.
    sample_ids : sequence of str, optional
        External identifiers, carried around but never interpreted.
    """

    n_labels: int
    labels_of: tuple[tuple[int, ...], ...]
    sample_ids: tuple[str, ...] | None = None
    _sets: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __init__(
        self,
        n_labels: int,
        labels_of: Iterable[Iterable[int]],
        sample_ids: Sequence[str] | None = None,
    ) -> None:
        if n_labels < 0:
            raise ValueError(f"n_labels must be >= 0, got {n_labels}")
        rows = []
        for i, raw in enumerate(labels_of):
            labels = tuple(sorted(raw))
            if len(set(labels)) != len(labels):
                raise ValueError(f"sample {i} has duplicate labels: {labels}")
            for idx in labels:
                if not 0 <= idx < n_labels:
                    raise ValueError(
                        f"sample {i} has label {idx} outside [0, {n_labels})"
                    )
            rows.append(labels)
        object.__setattr__(self, "n_labels", int(n_labels))
        object.__setattr__(self, "labels_of", tuple(rows))
        if sample_ids is not None:
            sample_ids = tuple(sample_ids)
            if len(sample_ids) != len(rows):
                raise ValueError(
                    f"{len(sample_ids)} sample_ids for {len(rows)} samples"
                )
        object.__setattr__(self, "sample_ids", sample_ids)
        object.__setattr__(self, "_sets", tuple(frozenset(r) for r in rows))

    @property
    def n_samples(self) -> int:
        return len(self.labels_of)

    @property
    def label_sets(self) -> tuple[frozenset[int], ...]:
        """Per-sample label sets as frozensets (fast membership tests)."""
        return self._sets

    def label_support(self, label: int) -> int:
        """Number of samples with positive evidence for `label`."""
        if not 0 <= label < self.n_labels:
            raise ValueError(f"label {label} outside [0, {self.n_labels})")
        return sum(1 for s in self._sets if label in s)

    def subset(self, indices: Iterable[int]) -> "MultiLabelDataset":
        """The sub-dataset at `indices`, keeping the full label space."""
        indices = list(indices)
        return MultiLabelDataset(
            self.n_labels,
            [self.labels_of[x] for x in indices],
            None if self.sample_ids is None else [self.sample_ids[x] for x in indices],
        )


def enumerate_label_sets(
    d: MultiLabelDataset, include_singletons: bool = True
) -> list[LabelSetKey]:
    """Enumerate every co-occurring label pair of `d`, optionally plus singletons.

    Returns the keys {i, j} with i < j that occur together in at least one
    sample and, when `include_singletons` is set, {i, i} for every label with
    at least one positive sample. The list is sorted by (lo, hi) and free of
    duplicates.
    """
    found: set[LabelSetKey] = set()
    for labels in d.labels_of:
        if include_singletons:
            for i in labels:
                found.add(LabelSetKey(i, i))
        for a in range(len(labels)):
            for b in range(a + 1, len(labels)):
                found.add(LabelSetKey(labels[a], labels[b]))
    return sorted(found)


def support_of(
    d: MultiLabelDataset, e: LabelSetKey, *, intersection: bool = False
) -> set[int]:
    """Sample indices evidencing the label set `e`.

    By default a pair is evidenced only by samples carrying both of its
    labels (a singleton by samples carrying its label). With
    `intersection=True` a sample evidences `e` as soon as it shares any
    label with it; this collapses pair supports to unions of label supports
    and exists for comparison runs only.
    """
    for idx in (e.lo, e.hi):
        if not 0 <= idx < d.n_labels:
            raise ValueError(f"label {idx} outside [0, {d.n_labels})")
    if intersection:
        members = e.labels()
        return {x for x, s in enumerate(d.label_sets) if s & members}
    if e.is_singleton:
        return {x for x, s in enumerate(d.label_sets) if e.lo in s}
    return {x for x, s in enumerate(d.label_sets) if e.lo in s and e.hi in s}


@dataclass
class DesirabilityLedger:
    """Remaining per-fold desirabilities: samples overall and per label set.

    `c_fold[j]` is how many more samples fold j should receive; `c_set[e][j]`
    how many more samples evidencing key `e`. Values are real (never rounded)
    and are decremented in place by a single stratifier run.
    """

    c_fold: list[float]
    c_set: dict[LabelSetKey, list[float]]

    @property
    def k(self) -> int:
        return len(self.c_fold)

    def copy(self) -> "DesirabilityLedger":
        return DesirabilityLedger(
            list(self.c_fold), {e: list(v) for e, v in self.c_set.items()}
        )


def uniform_proportions(k: int) -> tuple[float, ...]:
    return tuple(1.0 / k for _ in range(k))


def check_proportions(r: Sequence[float], k: int) -> tuple[float, ...]:
    """Validate a fold-proportion vector: k entries, nonnegative, summing to 1."""
    if k < 2:
        raise ValueError(f"need at least 2 folds, got k={k}")
    r = tuple(float(v) for v in r)
    if len(r) != k:
        raise ValueError(f"proportions have {len(r)} entries for k={k}")
    if any(v < 0 for v in r):
        raise ValueError(f"proportions must be nonnegative: {r}")
    total = sum(r)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"proportions sum to {total!r}, expected 1")
    return r


def build_ledger(
    d: MultiLabelDataset,
    keys: Sequence[LabelSetKey],
    k: int,
    r: Sequence[float],
    *,
    intersection: bool = False,
) -> DesirabilityLedger:
    """Initialise a ledger with c_fold[j] = n*r_j and c_set[e][j] = |support(e)|*r_j."""
    r = check_proportions(r, k)
    c_fold = [d.n_samples * rj for rj in r]
    c_set = {
        e: [len(support_of(d, e, intersection=intersection)) * rj for rj in r]
        for e in keys
    }
    ledger = DesirabilityLedger(c_fold, c_set)
    # Construction invariants: totals must match the dataset exactly.
    assert abs(sum(ledger.c_fold) - d.n_samples) <= 1e-9
    for e, row in ledger.c_set.items():
        assert abs(sum(row) - len(support_of(d, e, intersection=intersection))) <= 1e-9
    return ledger


@dataclass(frozen=True)
class FoldAssignment:
    """A k-way partition of sample indices plus provenance.

    `fold_of[x]` is the fold index of sample x; representing the partition
    per sample makes the exact-partition property structural.
    """

    k: int
    fold_of: tuple[int, ...]
    method: str
    seed: int
    proportions: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "fold_of", tuple(int(f) for f in self.fold_of))
        object.__setattr__(
            self, "proportions", tuple(float(p) for p in self.proportions)
        )
        if len(self.proportions) != self.k:
            raise ValueError(
                f"{len(self.proportions)} proportions for k={self.k} folds"
            )
        for x, j in enumerate(self.fold_of):
            if not 0 <= j < self.k:
                raise ValueError(f"sample {x} assigned to fold {j}, k={self.k}")

    @property
    def n_samples(self) -> int:
        return len(self.fold_of)

    def folds(self) -> list[list[int]]:
        """Fold contents as ascending sample-index lists, in fold order."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for x, j in enumerate(self.fold_of):
            out[j].append(x)
        return out

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for j in self.fold_of:
            sizes[j] += 1
        return sizes

    def test_indices(self, j: int) -> list[int]:
        """Samples held out by fold j (the fold itself)."""
        return [x for x, f in enumerate(self.fold_of) if f == j]

    def train_indices(self, j: int) -> list[int]:
        """Samples outside fold j."""
        return [x for x, f in enumerate(self.fold_of) if f != j]
