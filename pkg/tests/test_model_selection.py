import numpy as np
import pytest
from sklearn.model_selection import cross_val_score
from sklearn.neighbors import KNeighborsClassifier

from mlstrat.dataset import MultiLabelDataset
from mlstrat.model_selection import (
    IterativeStratifiedKFold,
    LabelsetStratifiedKFold,
    NaiveKFold,
    SecondOrderStratifiedKFold,
    check_multilabel_target,
)

SPLITTERS = (
    NaiveKFold,
    LabelsetStratifiedKFold,
    IterativeStratifiedKFold,
    SecondOrderStratifiedKFold,
)


def indicator(n=30, n_labels=4, seed=0):
    rng = np.random.RandomState(seed)
    y = (rng.rand(n, n_labels) < 0.3).astype(int)
    X = rng.rand(n, 3)
    return X, y


class TestTargetValidation:
    def test_indicator_matrix(self):
        d = check_multilabel_target(np.array([[1, 0], [1, 1], [0, 0]]))
        assert d.n_labels == 2
        assert d.labels_of == ((0,), (0, 1), ())

    def test_label_index_collections(self):
        d = check_multilabel_target([{0, 2}, set(), {1}])
        assert d.n_labels == 3
        assert d.labels_of == ((0, 2), (), (1,))

    def test_dataset_passthrough(self):
        d = MultiLabelDataset(2, [(0,)])
        assert check_multilabel_target(d) is d

    def test_rejects_non_binary_matrix(self):
        with pytest.raises(ValueError, match="binary"):
            check_multilabel_target(np.array([[0, 2], [1, 0]]))

    def test_rejects_1d_target(self):
        with pytest.raises(ValueError, match="2-dimensional"):
            check_multilabel_target(np.array([0, 1, 1]))

    def test_rejects_none(self):
        with pytest.raises(ValueError, match="required"):
            check_multilabel_target(None)


@pytest.mark.parametrize("cls", SPLITTERS)
class TestSplitterContract:
    def test_yields_k_partitioning_splits(self, cls):
        X, y = indicator()
        cv = cls(n_splits=5, random_state=1)
        splits = list(cv.split(X, y))
        assert len(splits) == 5
        all_test = np.sort(np.concatenate([test for _, test in splits]))
        assert np.array_equal(all_test, np.arange(len(X)))
        for train, test in splits:
            assert np.intersect1d(train, test).size == 0
            assert len(train) + len(test) == len(X)

    def test_get_n_splits(self, cls):
        assert cls(n_splits=7).get_n_splits() == 7

    def test_deterministic_given_random_state(self, cls):
        X, y = indicator(seed=3)
        a = [test.tolist() for _, test in cls(4, random_state=5).split(X, y)]
        b = [test.tolist() for _, test in cls(4, random_state=5).split(X, y)]
        assert a == b

    def test_get_set_params_roundtrip(self, cls):
        cv = cls(n_splits=3, random_state=9)
        params = cv.get_params()
        assert params["n_splits"] == 3
        assert params["random_state"] == 9
        cv.set_params(n_splits=4)
        assert cv.get_n_splits() == 4


class TestEquivalentTargets:
    def test_matrix_and_sets_give_same_folds(self):
        X, y = indicator(seed=7)
        as_sets = [set(np.flatnonzero(row)) for row in y]
        cv = SecondOrderStratifiedKFold(5, random_state=2)
        a = [test.tolist() for _, test in cv.split(X, y)]
        b = [test.tolist() for _, test in cv.split(X, as_sets)]
        assert a == b


class TestEcosystemComposition:
    def test_cross_val_score_accepts_splitter(self):
        X, y = indicator(n=40, seed=11)
        cv = SecondOrderStratifiedKFold(n_splits=4, random_state=0)
        scores = cross_val_score(KNeighborsClassifier(n_neighbors=3), X, y, cv=cv)
        assert scores.shape == (4,)

    def test_naive_kfold_shuffle_param(self):
        X, y = indicator(seed=5)
        plain = [t.tolist() for _, t in NaiveKFold(3, shuffle=False).split(X, y)]
        shuffled = [
            t.tolist() for _, t in NaiveKFold(3, shuffle=True, random_state=1).split(X, y)
        ]
        assert plain != shuffled
        assert plain[0] == list(range(10))

    def test_repr_mentions_params(self):
        cv = IterativeStratifiedKFold(n_splits=3, random_state=4)
        assert "n_splits=3" in repr(cv)
