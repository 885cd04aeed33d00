"""Fold-assignment strategies for multi-label data.

Four methods share one configuration surface:

* ``kfold``    - contiguous windows over the (optionally shuffled) sample order
* ``labelset`` - stratification over label-powerset classes
* ``is``       - iterative stratification driven by single-label desirability
* ``sois``     - second-order iterative stratification driven by co-occurring
  label pairs plus singletons, falling back to single labels once pair
  evidence is exhausted

All randomness comes from ``random.Random(seed)`` (the stdlib Mersenne
Twister), drawn only to break otherwise-unresolved ties, so any
(dataset, config) pair reproduces the same folds on every platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .dataset import (
    DesirabilityLedger,
    FoldAssignment,
    LabelSetKey,
    MultiLabelDataset,
    build_ledger,
    check_proportions,
    enumerate_label_sets,
    uniform_proportions,
)

METHODS = ("kfold", "labelset", "is", "sois")


@dataclass(frozen=True)
class StratifierConfig:
    """Shared stratifier settings.

    Parameters
    ----------
    k : int
        Number of folds, at least 2.
    proportions : sequence of float, optional
        Desired per-fold sample proportions; defaults to uniform 1/k.
    seed : int
        Seed for tie-breaking; folds are fully determined by (dataset, config).
    method : str
        One of ``kfold``, ``labelset``, ``is``, ``sois``.
    shuffle : bool
        Shuffle sample order before windowing (``kfold`` only).
    intersection_support : bool
        Evidence a pair by either of its labels instead of both. Comparison
        mode only; collapses second-order structure.
    single_key_updates : bool
        On assignment decrement only the selected key's desirability instead
        of every key the sample evidences. Comparison mode only.
    """

    k: int
    proportions: tuple[float, ...] | None = None
    seed: int = 0
    method: str = "sois"
    shuffle: bool = False
    intersection_support: bool = False
    single_key_updates: bool = False

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}, expected {METHODS}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        r = (
            uniform_proportions(self.k)
            if self.proportions is None
            else tuple(float(p) for p in self.proportions)
        )
        check_proportions(r, self.k)
        object.__setattr__(self, "proportions", r)


def split(d: MultiLabelDataset, cfg: StratifierConfig) -> FoldAssignment:
    """Dispatch to the configured strategy."""
    fn = {
        "kfold": split_kfold,
        "labelset": split_labelset,
        "is": split_is,
        "sois": split_sois,
    }[cfg.method]
    return fn(d, cfg)


def _check_k(d: MultiLabelDataset, cfg: StratifierConfig) -> None:
    if cfg.k > d.n_samples:
        raise ValueError(f"k={cfg.k} exceeds n_samples={d.n_samples}")


def _fold_sizes(n: int, r: Sequence[float]) -> list[int]:
    # Largest-remainder apportionment of n over the target proportions,
    # remainder ties going to the earliest folds. For uniform r this is the
    # classic n//k + 1-for-the-first-(n%k) windowing.
    quotas = [n * rj for rj in r]
    sizes = [int(q) for q in quotas]
    remainders = sorted(
        range(len(r)), key=lambda j: (-(quotas[j] - sizes[j]), j)
    )
    for j in remainders[: n - sum(sizes)]:
        sizes[j] += 1
    return sizes


def split_kfold(d: MultiLabelDataset, cfg: StratifierConfig) -> FoldAssignment:
    """Contiguous windows over the sample order, shuffled first when asked."""
    _check_k(d, cfg)
    order = list(range(d.n_samples))
    if cfg.shuffle:
        random.Random(cfg.seed).shuffle(order)
    sizes = _fold_sizes(d.n_samples, cfg.proportions)
    fold_of = [0] * d.n_samples
    pos = 0
    for j, size in enumerate(sizes):
        for x in order[pos : pos + size]:
            fold_of[x] = j
        pos += size
    return FoldAssignment(cfg.k, tuple(fold_of), "kfold", cfg.seed, cfg.proportions)


def split_labelset(d: MultiLabelDataset, cfg: StratifierConfig) -> FoldAssignment:
    """Stratify over label-powerset classes.

    Each distinct full label set is one class. Classes are handled in
    descending frequency (ties by label-set order) and their samples dealt
    one by one to the fold with the greatest remaining sample desirability.
    """
    _check_k(d, cfg)
    rng = random.Random(cfg.seed)
    classes: dict[tuple[int, ...], list[int]] = {}
    for x, labels in enumerate(d.labels_of):
        classes.setdefault(labels, []).append(x)
    order = sorted(classes, key=lambda ls: (-len(classes[ls]), ls))

    c_fold = [d.n_samples * rj for rj in cfg.proportions]
    fold_of = [0] * d.n_samples
    for labels in order:
        for x in classes[labels]:
            m = _argmax_fold(c_fold, rng)
            fold_of[x] = m
            c_fold[m] -= 1
    return FoldAssignment(cfg.k, tuple(fold_of), "labelset", cfg.seed, cfg.proportions)


def _argmax_fold(c_fold: Sequence[float], rng: random.Random) -> int:
    best = max(c_fold)
    ties = [j for j, v in enumerate(c_fold) if v == best]
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


def _keys_evidenced_by(
    labels: tuple[int, ...],
    keyset: set[LabelSetKey],
    by_label: dict[int, list[LabelSetKey]],
    intersection: bool,
) -> list[LabelSetKey]:
    """All keys a sample with these labels counts as evidence for."""
    if intersection:
        seen: set[LabelSetKey] = set()
        for i in labels:
            seen.update(by_label.get(i, ()))
        return sorted(seen)
    found = []
    for a in range(len(labels)):
        key = LabelSetKey(labels[a], labels[a])
        if key in keyset:
            found.append(key)
        for b in range(a + 1, len(labels)):
            key = LabelSetKey(labels[a], labels[b])
            if key in keyset:
                found.append(key)
    return found


def distribute_over_folds(
    d: MultiLabelDataset,
    keys: Sequence[LabelSetKey],
    ledger: DesirabilityLedger,
    rng: random.Random,
    *,
    method: str = "custom",
    seed: int = 0,
    proportions: Sequence[float] | None = None,
    intersection_support: bool = False,
    single_key_updates: bool = False,
    trace: list | None = None,
) -> FoldAssignment:
    """Iteratively distribute samples into folds, scarcest label set first.

    While any key still has unassigned evidencing samples: pick the key with
    the smallest nonempty available support (ties by key order) and assign
    each of its samples, in ascending index, to the fold with the greatest
    remaining desirability for that key; ties fall through to the fold with
    the greatest remaining sample desirability, then to the seeded RNG. Each
    assignment decrements the chosen fold's sample desirability and its
    desirability for every key the sample evidences (only the selected key
    when `single_key_updates` is set). Samples left after the loop, the
    label-free ones under the standard key sets, go to the fold needing the
    most samples, RNG on ties.

    The ledger is consumed in place. `trace`, when given, receives one record
    per outer iteration: (selected key, available support sizes per key).
    """
    keys = list(keys)
    if set(keys) != set(ledger.c_set):
        raise ValueError("ledger keys do not match the provided key list")
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate keys")
    k = ledger.k
    proportions = (
        uniform_proportions(k) if proportions is None else tuple(proportions)
    )

    keyset = set(keys)
    by_label: dict[int, list[LabelSetKey]] = {}
    for e in keys:
        for i in e.labels():
            by_label.setdefault(i, []).append(e)

    n = d.n_samples
    fold_of = [-1] * n
    sample_keys: list[list[LabelSetKey]] = []
    available: dict[LabelSetKey, set[int]] = {e: set() for e in keys}
    for x, labels in enumerate(d.labels_of):
        evid = _keys_evidenced_by(labels, keyset, by_label, intersection_support)
        sample_keys.append(evid)
        for e in evid:
            available[e].add(x)

    while True:
        selected: LabelSetKey | None = None
        for e in keys:
            size = len(available[e])
            if size == 0:
                continue
            if (
                selected is None
                or size < len(available[selected])
                or (size == len(available[selected]) and e < selected)
            ):
                selected = e
        if selected is None:
            break
        if trace is not None:
            trace.append(
                (selected, {e: len(s) for e, s in available.items() if s})
            )
        c_key = ledger.c_set[selected]
        for x in sorted(available[selected]):
            m = _pick_fold(c_key, ledger.c_fold, rng)
            fold_of[x] = m
            ledger.c_fold[m] -= 1
            updated = [selected] if single_key_updates else sample_keys[x]
            for e in updated:
                ledger.c_set[e][m] -= 1
            for e in sample_keys[x]:
                available[e].discard(x)

    # Remaining samples evidence no key; under singleton-covering key sets
    # these are exactly the label-free samples.
    for x in range(n):
        if fold_of[x] != -1:
            continue
        m = _argmax_fold(ledger.c_fold, rng)
        fold_of[x] = m
        ledger.c_fold[m] -= 1

    return FoldAssignment(k, tuple(fold_of), method, seed, tuple(proportions))


def _pick_fold(
    c_key: Sequence[float], c_fold: Sequence[float], rng: random.Random
) -> int:
    best = max(c_key)
    ties = [j for j, v in enumerate(c_key) if v == best]
    if len(ties) == 1:
        return ties[0]
    best_fold = max(c_fold[j] for j in ties)
    ties = [j for j in ties if c_fold[j] == best_fold]
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


def split_is(d: MultiLabelDataset, cfg: StratifierConfig) -> FoldAssignment:
    """First-order iterative stratification: desirability units are single labels."""
    _check_k(d, cfg)
    keys = [LabelSetKey(i, i) for i in range(d.n_labels)]
    ledger = build_ledger(
        d, keys, cfg.k, cfg.proportions, intersection=cfg.intersection_support
    )
    return distribute_over_folds(
        d,
        keys,
        ledger,
        random.Random(cfg.seed),
        method="is",
        seed=cfg.seed,
        proportions=cfg.proportions,
        intersection_support=cfg.intersection_support,
        single_key_updates=cfg.single_key_updates,
    )


def split_sois(
    d: MultiLabelDataset, cfg: StratifierConfig, trace: list | None = None
) -> FoldAssignment:
    """Second-order iterative stratification.

    Desirability units are the co-occurring label pairs plus the singleton
    labels. Running the iterative distribution once over the combined key set
    handles pairs while their evidence is scarce and degrades to first-order
    stratification through the singleton keys once pair evidence runs out.
    """
    _check_k(d, cfg)
    keys = enumerate_label_sets(d, include_singletons=True)
    ledger = build_ledger(
        d, keys, cfg.k, cfg.proportions, intersection=cfg.intersection_support
    )
    return distribute_over_folds(
        d,
        keys,
        ledger,
        random.Random(cfg.seed),
        method="sois",
        seed=cfg.seed,
        proportions=cfg.proportions,
        intersection_support=cfg.intersection_support,
        single_key_updates=cfg.single_key_updates,
        trace=trace,
    )
