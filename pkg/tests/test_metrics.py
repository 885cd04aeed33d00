import random

import pytest

from helpers import random_dataset
from oracles import (
    naive_ed,
    naive_ld,
    naive_lpd,
    naive_pair_miss,
    naive_zero_counts,
)
from mlstrat.dataset import FoldAssignment, MultiLabelDataset
from mlstrat.metrics import (
    examples_distribution,
    fold_stats,
    label_distribution,
    label_pair_distribution,
    pair_miss_percentage,
    zero_counts,
)

PAIR_DATASET = MultiLabelDataset(2, [(0, 1), (0, 1), (0,), (1,)])


def assignment(fold_of, k=2):
    return FoldAssignment(k, tuple(fold_of), "m", 0, tuple([1.0 / k] * k))


class TestLabelDistribution:
    def test_matching_proportions_give_zero(self):
        d = MultiLabelDataset(1, [(0,), (), (0,), ()])
        assert label_distribution(d, assignment((0, 0, 1, 1))) == 0.0

    def test_clamped_hand_example(self):
        d = MultiLabelDataset(1, [(0,), (0,), (0,), (0,), (), ()])
        # fold {0,1,2} is all-positive: denominator clamps to 1
        assert label_distribution(d, assignment((0, 0, 0, 1, 1, 1))) == pytest.approx(
            1.25
        )

    def test_balanced_folds_give_zero(self):
        d = MultiLabelDataset(1, [(0,), (0,), (0,), (0,), (), ()])
        assert label_distribution(d, assignment((0, 0, 1, 1, 0, 1))) == 0.0

    def test_empty_fold_errors(self):
        d = MultiLabelDataset(1, [(0,), (0,)])
        with pytest.raises(ValueError, match="empty fold"):
            label_distribution(d, assignment((0, 0)))

    def test_mismatched_assignment_errors(self):
        with pytest.raises(ValueError, match="covers"):
            label_distribution(PAIR_DATASET, assignment((0, 1)))

    def test_zero_support_labels_skipped_and_reported(self):
        d = MultiLabelDataset(3, [(0,), (0,), (), ()])
        a = assignment((0, 1, 0, 1))
        stats = fold_stats(d, a)
        assert stats.zero_support_labels == (1, 2)
        assert stats.ld == label_distribution(d, a)


class TestLabelPairDistribution:
    def test_balanced_pairs_give_zero(self):
        assert label_pair_distribution(PAIR_DATASET, assignment((0, 1, 1, 0))) == 0.0

    def test_clamped_hand_example(self):
        assert label_pair_distribution(
            PAIR_DATASET, assignment((0, 0, 1, 1))
        ) == pytest.approx(1.0)

    def test_no_pairs_defined_as_zero(self):
        d = MultiLabelDataset(2, [(0,), (1,), (), ()])
        assert label_pair_distribution(d, assignment((0, 1, 0, 1))) == 0.0


class TestExamplesDistribution:
    def test_exact_targets(self):
        a = assignment([0] * 5 + [1] * 5)
        assert examples_distribution(a, (5, 5)) == 0.0

    def test_hand_arithmetic(self):
        assert examples_distribution(assignment((0, 0, 0, 1)), (2, 2)) == 1.0
        assert examples_distribution(assignment([0] * 6 + [1] * 4), (5, 5)) == 1.0

    def test_targets_default_to_proportions(self):
        a = FoldAssignment(2, (0, 0, 0, 1), "m", 0, (0.75, 0.25))
        assert examples_distribution(a) == 0.0

    def test_wrong_target_count(self):
        with pytest.raises(ValueError, match="targets"):
            examples_distribution(assignment((0, 1)), (1, 1, 0))


class TestZeroCounts:
    def test_fully_evidenced_contributes_nothing(self):
        d = MultiLabelDataset(1, [(0,), (0,)])
        assert zero_counts(d, assignment((0, 1))) == (0, 0, 0)

    def test_single_sided_label(self):
        d = MultiLabelDataset(1, [(0,), ()])
        assert zero_counts(d, assignment((0, 1))) == (1, 1, 0)

    def test_flpz_inevitable_minimum(self):
        rows = [(0, 1)] * 3 + [()] * 7
        d = MultiLabelDataset(2, rows)
        fold_of = [0, 0, 1] + list(range(2, 9))
        a = FoldAssignment(10, tuple(fold_of), "m", 0, tuple([0.1] * 10))
        fz, flz, flpz = zero_counts(d, a)
        assert flpz == 1  # 8 missing folds minus the inevitable 10 - 3

    def test_unsupported_labels_ignored(self):
        d = MultiLabelDataset(2, [(0,), (0,)])
        assert zero_counts(d, assignment((0, 1))) == (0, 0, 0)


class TestPairMissPercentage:
    def test_fully_covered(self):
        d = MultiLabelDataset(2, [(0, 1), (0, 1)])
        assert pair_miss_percentage(d, assignment((0, 1))) == (0.0, 0.0)

    def test_one_sided_pair(self):
        d = MultiLabelDataset(2, [(0, 1), ()])
        assert pair_miss_percentage(d, assignment((0, 1))) == (0.5, 0.5)

    def test_no_pairs(self):
        d = MultiLabelDataset(2, [(0,), (1,)])
        assert pair_miss_percentage(d, assignment((0, 1))) == (0.0, 0.0)


class TestInvariants:
    def test_fold_relabeling_invariance(self):
        rng = random.Random(21)
        for _ in range(25):
            n = rng.randint(4, 24)
            k = rng.randint(2, 4)
            d = random_dataset(rng, n, rng.randint(1, 5), 0.3)
            fold_of = [x % k for x in range(n)]
            rng.shuffle(fold_of)
            perm = list(range(k))
            rng.shuffle(perm)
            a = FoldAssignment(k, tuple(fold_of), "m", 0, tuple([1 / k] * k))
            b = FoldAssignment(
                k, tuple(perm[j] for j in fold_of), "m", 0, tuple([1 / k] * k)
            )
            assert fold_stats(d, a).measures() == pytest.approx(
                fold_stats(d, b).measures()
            )

    def test_measures_nonnegative(self):
        rng = random.Random(22)
        for _ in range(25):
            n = rng.randint(4, 24)
            k = rng.randint(2, 4)
            d = random_dataset(rng, n, rng.randint(1, 5), 0.3)
            fold_of = [x % k for x in range(n)]
            rng.shuffle(fold_of)
            a = FoldAssignment(k, tuple(fold_of), "m", 0, tuple([1 / k] * k))
            stats = fold_stats(d, a)
            assert stats.ld >= 0 and stats.lpd >= 0 and stats.ed >= 0
            assert stats.fz <= a.k
            assert stats.flz <= a.k * d.n_labels
            assert 0 <= stats.pair_miss_pct_mean <= 1
            assert 0 <= stats.pair_miss_pct_std <= 1

    def test_matches_naive_recomputation(self):
        rng = random.Random(23)
        for _ in range(60):
            n = rng.randint(2, 16)
            k = rng.randint(2, min(n, 4))
            d = random_dataset(rng, n, rng.randint(1, 4), 0.35)
            fold_of = [x % k for x in range(n)]
            rng.shuffle(fold_of)
            a = FoldAssignment(k, tuple(fold_of), "m", 0, tuple([1 / k] * k))
            folds = a.folds()
            stats = fold_stats(d, a)
            targets = [n / k] * k
            assert stats.ld == pytest.approx(
                naive_ld(d.labels_of, d.n_labels, folds), abs=1e-12
            )
            assert stats.lpd == pytest.approx(naive_lpd(d.labels_of, folds), abs=1e-12)
            assert stats.ed == pytest.approx(naive_ed(folds, targets), abs=1e-12)
            assert (stats.fz, stats.flz, stats.flpz) == naive_zero_counts(
                d.labels_of, d.n_labels, folds
            )
            miss = naive_pair_miss(d.labels_of, folds)
            assert stats.pair_miss_pct_mean == pytest.approx(miss[0], abs=1e-12)
            assert stats.pair_miss_pct_std == pytest.approx(miss[1], abs=1e-12)
