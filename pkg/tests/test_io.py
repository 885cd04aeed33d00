import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlstrat.dataset import FoldAssignment, MultiLabelDataset
from mlstrat.errors import FoldValidationError, ParseError
from mlstrat.io import (
    folds_from_json,
    folds_to_json,
    parse_canonical,
    read_dataset,
    read_folds,
    write_canonical,
    write_folds,
)


class TestCanonicalFormat:
    def test_parse_reference_dataset(self):
        d = parse_canonical("4 2\n0 1\n0 1\n0\n1")
        assert d.n_samples == 4
        assert d.n_labels == 2
        assert d.labels_of == ((0, 1), (0, 1), (0,), (1,))

    def test_blank_line_is_empty_label_set(self):
        d = parse_canonical("1 3\n\n")
        assert d.n_samples == 1
        assert d.labels_of == ((),)

    def test_out_of_range_index(self):
        with pytest.raises(ParseError, match="line 2.*outside"):
            parse_canonical("2 2\n0 5\n1\n")

    def test_non_integer_token(self):
        with pytest.raises(ParseError, match="non-integer"):
            parse_canonical("1 2\n0 x\n")

    def test_wrong_line_count(self):
        with pytest.raises(ParseError, match="expected 3 sample lines"):
            parse_canonical("3 2\n0\n1\n")

    def test_bad_header(self):
        with pytest.raises(ParseError, match="header"):
            parse_canonical("just one\n")

    def test_duplicate_label(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_canonical("1 2\n1 1\n")

    @given(
        st.integers(1, 5).flatmap(
            lambda n_labels: st.lists(
                st.sets(st.integers(0, n_labels - 1)), min_size=0, max_size=10
            ).map(lambda rows: MultiLabelDataset(n_labels, [sorted(r) for r in rows]))
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_is_identity(self, d):
        again = parse_canonical(write_canonical(d))
        assert again.n_samples == d.n_samples
        assert again.n_labels == d.n_labels
        assert again.labels_of == d.labels_of


@st.composite
def assignments(draw):
    n = draw(st.integers(1, 25))
    k = draw(st.integers(1, min(n, 6)))
    fold_of = [draw(st.integers(0, k - 1)) for _ in range(n)]
    seed = draw(st.integers(0, 2**63))
    return FoldAssignment(k, tuple(fold_of), "sois", seed, tuple([1.0 / k] * k))


class TestFoldJson:
    def test_roundtrip_equality(self):
        a = FoldAssignment(2, (0, 1, 1, 0), "is", 9, (0.5, 0.5))
        assert folds_from_json(folds_to_json(a)) == a

    @given(assignments())
    @settings(max_examples=80, deadline=None)
    def test_roundtrip_property(self, a):
        assert folds_from_json(folds_to_json(a)) == a

    def test_key_order_and_sorted_folds(self):
        a = FoldAssignment(2, (0, 1, 1, 0), "kfold", 0, (0.5, 0.5))
        text = folds_to_json(a)
        assert text.index('"method"') < text.index('"seed"') < text.index('"k"')
        assert text.index('"k"') < text.index('"proportions"') < text.index('"folds"')
        payload = folds_from_json(text)
        assert payload.folds() == [[0, 3], [1, 2]]
        assert text.endswith("\n")

    def test_overlapping_folds_rejected(self):
        bad = '{"method":"m","seed":0,"k":2,"proportions":[0.5,0.5],"folds":[[0,1],[1,2]]}'
        with pytest.raises(FoldValidationError, match="sample 1"):
            folds_from_json(bad)

    def test_missing_sample_rejected(self):
        bad = '{"method":"m","seed":0,"k":2,"proportions":[0.5,0.5],"folds":[[0],[2]]}'
        with pytest.raises(FoldValidationError, match="cover"):
            folds_from_json(bad)

    def test_malformed_json(self):
        with pytest.raises(ParseError, match="malformed"):
            folds_from_json("{nope")

    def test_missing_keys(self):
        with pytest.raises(ParseError, match="missing keys"):
            folds_from_json('{"method":"m"}')

    def test_fold_count_must_match_k(self):
        bad = '{"method":"m","seed":0,"k":3,"proportions":[0.5,0.5,0.0],"folds":[[0],[1]]}'
        with pytest.raises(FoldValidationError, match="folds listed"):
            folds_from_json(bad)

    def test_write_and_read_paths_and_streams(self, tmp_path):
        a = FoldAssignment(2, (1, 0, 0, 1), "labelset", 3, (0.5, 0.5))
        path = tmp_path / "folds.json"
        write_folds(a, path)
        assert read_folds(path) == a
        buf = io.StringIO()
        write_folds(a, buf)
        buf.seek(0)
        assert read_folds(buf) == a

    def test_serialization_is_deterministic(self):
        a = FoldAssignment(3, (0, 1, 2, 0), "sois", 11, (0.4, 0.3, 0.3))
        assert folds_to_json(a) == folds_to_json(a)


class TestReadDataset:
    def test_canonical_dispatch(self, tmp_path):
        p = tmp_path / "d.txt"
        p.write_text("2 2\n0\n1\n", encoding="utf-8")
        d = read_dataset(p, "canonical")
        assert d.labels_of == ((0,), (1,))

    def test_arff_dispatch(self, tmp_path):
        p = tmp_path / "d.arff"
        p.write_text(
            "@relation t\n@attribute f numeric\n@attribute l {0,1}\n@data\n1,1\n",
            encoding="utf-8",
        )
        d = read_dataset(p, "arff", label_count=1)
        assert d.labels_of == ((0,),)

    def test_arff_needs_label_locator(self, tmp_path):
        p = tmp_path / "d.arff"
        p.write_text("@relation t\n@attribute l {0,1}\n@data\n1\n", encoding="utf-8")
        with pytest.raises(ParseError, match="label count"):
            read_dataset(p, "arff")

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ParseError, match="unknown dataset format"):
            read_dataset(tmp_path / "x", "csv")
