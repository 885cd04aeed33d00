"""scikit-learn compatible cross-validators backed by the stratifiers.

Each splitter follows the sklearn CV contract (``split`` yielding
(train, test) index arrays, ``get_n_splits``, ``get_params``/``set_params``)
so it drops into ``cross_val_score``, ``GridSearchCV`` and friends. `y` is
the multi-label target: a binary indicator matrix, a sequence of label-index
collections, or an existing :class:`MultiLabelDataset`.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.model_selection import BaseCrossValidator

from .dataset import MultiLabelDataset
from .stratifiers import StratifierConfig, split as run_split

MultiLabelTarget = Union[MultiLabelDataset, np.ndarray, Sequence[Iterable[int]]]


def check_multilabel_target(y: MultiLabelTarget) -> MultiLabelDataset:
    """Coerce a multi-label target into a MultiLabelDataset.

    Accepts a binary indicator matrix of shape (n_samples, n_labels), a
    sequence of per-sample label-index collections (n_labels inferred as
    max index + 1), or a dataset, which is passed through.
    """
    if isinstance(y, MultiLabelDataset):
        return y
    if y is None:
        raise ValueError("y is required for multi-label stratification")
    try:
        arr = np.asarray(y)
    except ValueError:
        arr = None  # ragged input: per-sample label collections
    if arr is not None and arr.dtype != object:
        if arr.ndim != 2:
            raise ValueError(
                f"indicator matrix must be 2-dimensional, got shape {arr.shape}"
            )
        values = np.unique(arr)
        if not np.isin(values, (0, 1)).all():
            raise ValueError(
                f"indicator matrix must be binary, found values {values[:5]}; "
                "pass label-index collections for sparse targets"
            )
        labels_of = [np.flatnonzero(row).tolist() for row in arr]
        return MultiLabelDataset(arr.shape[1], labels_of)
    rows = [sorted(int(i) for i in labels) for labels in y]
    n_labels = max((row[-1] for row in rows if row), default=-1) + 1
    return MultiLabelDataset(n_labels, rows)


class _BaseMultiLabelKFold(BaseCrossValidator, BaseEstimator):
    """Shared splitter plumbing; subclasses fix the stratification method."""

    _method: str = "sois"

    def __init__(self, n_splits: int = 10, *, random_state: int = 0):
        self.n_splits = n_splits
        self.random_state = random_state

    def _config(self) -> StratifierConfig:
        seed = 0 if self.random_state is None else int(self.random_state)
        return StratifierConfig(k=self.n_splits, seed=seed, method=self._method)

    def _iter_test_indices(self, X=None, y=None, groups=None):
        dataset = check_multilabel_target(y)
        assignment = run_split(dataset, self._config())
        for j in range(assignment.k):
            yield np.asarray(assignment.test_indices(j), dtype=int)

    def get_n_splits(self, X=None, y=None, groups=None) -> int:
        return self.n_splits


class NaiveKFold(_BaseMultiLabelKFold):
    """Plain windowed k-fold over a seeded shuffle of the sample order.

    The baseline the stratified splitters are compared against; ignores the
    label structure entirely.
    """

    _method = "kfold"

    def __init__(
        self, n_splits: int = 10, *, shuffle: bool = True, random_state: int = 0
    ):
        super().__init__(n_splits, random_state=random_state)
        self.shuffle = shuffle

    def _config(self) -> StratifierConfig:
        seed = 0 if self.random_state is None else int(self.random_state)
        return StratifierConfig(
            k=self.n_splits, seed=seed, method="kfold", shuffle=self.shuffle
        )


class LabelsetStratifiedKFold(_BaseMultiLabelKFold):
    """Stratified k-fold over label-powerset classes (distinct full label sets)."""

    _method = "labelset"


class IterativeStratifiedKFold(_BaseMultiLabelKFold):
    """Iterative stratification: scarcest label first, most-desiring fold wins."""

    _method = "is"


class SecondOrderStratifiedKFold(_BaseMultiLabelKFold):
    """Iterative stratification over co-occurring label pairs plus singletons."""

    _method = "sois"
