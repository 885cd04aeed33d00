"""Shared dataset generators for tests and the acceptance suite."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

from mlstrat.dataset import MultiLabelDataset


def random_dataset(
    rng: random.Random, n: int, n_labels: int, density: float
) -> MultiLabelDataset:
    """Independent per-(sample, label) coin flips."""
    rows = [
        [i for i in range(n_labels) if rng.random() < density] for _ in range(n)
    ]
    return MultiLabelDataset(n_labels, rows)


def no_pair_dataset(rng: random.Random, n: int, n_labels: int) -> MultiLabelDataset:
    """At most one label per sample, so no pair ever co-occurs."""
    rows = []
    for _ in range(n):
        if rng.random() < 0.3:
            rows.append([])
        else:
            rows.append([rng.randrange(n_labels)])
    return MultiLabelDataset(n_labels, rows)


def synthetic_dataset(seed: int, n: int = 200, n_labels: int = 10) -> MultiLabelDataset:
    """The acceptance suite's generator: structured labels at density 0.1.

    70% of samples draw their labels from one of three latent label groups
    (per-label probability 0.3 inside the group), the rest flip each label
    independently at 0.1. Expected label density is 0.1 overall, with the
    co-occurrence structure concentrated inside the groups the way real
    multi-label data concentrates it.
    """
    rng = random.Random(seed)
    labels = list(range(n_labels))
    rng.shuffle(labels)
    third = n_labels // 3
    groups = [
        labels[: n_labels - 2 * third],
        labels[n_labels - 2 * third : n_labels - third],
        labels[n_labels - third :],
    ]
    rows = []
    for _ in range(n):
        if rng.random() < 0.7:
            group = groups[rng.randrange(len(groups))]
            rows.append(sorted(i for i in group if rng.random() < 0.3))
        else:
            rows.append([i for i in range(n_labels) if rng.random() < 0.1])
    return MultiLabelDataset(n_labels, rows)


def exhaustive_datasets(max_n: int, max_labels: int):
    """Every dataset content up to `max_n` samples over at most `max_labels`.

    Datasets are enumerated as multisets of label subsets: sample order is
    irrelevant to the metrics because assignments are generated on top of the
    enumerated rows. Yields (n_labels, dataset) pairs.
    """
    for n_labels in range(max_labels + 1):
        subsets = []
        for mask in range(2 ** n_labels):
            subsets.append(tuple(i for i in range(n_labels) if mask & (1 << i)))
        for n in range(2, max_n + 1):
            for combo in combinations_with_replacement(subsets, n):
                yield n_labels, MultiLabelDataset(n_labels, list(combo))
