import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trfnet.data import (
    Dataset,
    DiscretizationPolicy,
    discretize,
    load_dense_csv,
    load_sparse_bow,
    save_dense_csv,
    save_sparse_bow,
    split,
)
from trfnet.errors import DataFormatError, EmptyInputError, PolicyViolationError


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestDenseCsv:
    def test_basic_readback(self, tmp_path):
        p = write(tmp_path, "d.csv", "a,b,y\n1,2,0\n3,4,1\n")
        d = load_dense_csv(p, has_labels=True)
        assert d.n_samples == 2 and d.n_features == 2
        assert d.feature_names == ("a", "b")
        np.testing.assert_array_equal(d.values, [[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(d.labels, [0, 1])

    def test_header_only_is_empty_input(self, tmp_path):
        p = write(tmp_path, "d.csv", "a,b\n")
        with pytest.raises(EmptyInputError):
            load_dense_csv(p)

    def test_empty_file(self, tmp_path):
        p = write(tmp_path, "d.csv", "")
        with pytest.raises(EmptyInputError):
            load_dense_csv(p)

    def test_bad_cell_names_line(self, tmp_path):
        p = write(tmp_path, "d.csv", "a,b,y\n1,x,0\n")
        with pytest.raises(DataFormatError, match="line 2"):
            load_dense_csv(p, has_labels=True)

    def test_wrong_arity_names_line(self, tmp_path):
        p = write(tmp_path, "d.csv", "a,b\n1,2\n3\n")
        with pytest.raises(DataFormatError, match="line 3"):
            load_dense_csv(p)

    def test_non_integer_label(self, tmp_path):
        p = write(tmp_path, "d.csv", "a,b,y\n1,2,zero\n")
        with pytest.raises(DataFormatError, match="label"):
            load_dense_csv(p, has_labels=True)

    def test_roundtrip_exact(self, tmp_path):
        rng = np.random.default_rng(5)
        d = Dataset(rng.normal(size=(7, 4)), labels=rng.integers(0, 3, 7))
        p = tmp_path / "rt.csv"
        save_dense_csv(d, p)
        back = load_dense_csv(p, has_labels=True)
        np.testing.assert_array_equal(back.values, d.values)
        np.testing.assert_array_equal(back.labels, d.labels)


class TestSparseBow:
    def test_basic_readback(self, tmp_path):
        vocab = write(tmp_path, "v.txt", "cat\ndog\nfish\n")
        docs = write(tmp_path, "d.txt", "1 0:2 2:1\n")
        d = load_sparse_bow(docs, vocab)
        np.testing.assert_array_equal(d.values, [[2.0, 0.0, 1.0]])
        assert d.labels.tolist() == [1]
        assert d.feature_names == ("cat", "dog", "fish")

    def test_empty_document_row(self, tmp_path):
        vocab = write(tmp_path, "v.txt", "a\nb\nc\n")
        docs = write(tmp_path, "d.txt", "0\n")
        d = load_sparse_bow(docs, vocab)
        np.testing.assert_array_equal(d.values, [[0.0, 0.0, 0.0]])
        assert d.labels.tolist() == [0]

    def test_out_of_vocabulary_index(self, tmp_path):
        vocab = write(tmp_path, "v.txt", "a\nb\nc\n")
        docs = write(tmp_path, "d.txt", "0 5:1\n")
        with pytest.raises(DataFormatError, match="line 1"):
            load_sparse_bow(docs, vocab)

    def test_duplicate_index(self, tmp_path):
        vocab = write(tmp_path, "v.txt", "a\nb\nc\n")
        docs = write(tmp_path, "d.txt", "0 1:1 1:2\n")
        with pytest.raises(DataFormatError, match="duplicate"):
            load_sparse_bow(docs, vocab)

    def test_roundtrip_exact(self, tmp_path):
        rng = np.random.default_rng(9)
        values = rng.integers(0, 4, size=(6, 5)).astype(np.float64)
        values[0, 0] = 1.0  # keep at least one nonzero somewhere
        d = Dataset(values, labels=rng.integers(0, 2, 6))
        save_sparse_bow(d, tmp_path / "d.txt", tmp_path / "v.txt")
        back = load_sparse_bow(tmp_path / "d.txt", tmp_path / "v.txt")
        np.testing.assert_array_equal(back.values, d.values)
        np.testing.assert_array_equal(back.labels, d.labels)


class TestDiscretize:
    def test_median_split(self):
        d = Dataset(np.array([[1.0, 0], [2, 0], [3, 1], [4, 1]]))
        b = discretize(d, DiscretizationPolicy.median())
        np.testing.assert_array_equal(b.values[:, 0], [0, 0, 1, 1])

    def test_fixed_zero_on_binary_is_identity(self):
        values = np.array([[0.0, 1], [1, 0], [1, 1]])
        d = Dataset(values)
        b = discretize(d, DiscretizationPolicy.fixed(0.0))
        np.testing.assert_array_equal(b.values, values)

    def test_ties_go_to_zero(self):
        d = Dataset(np.array([[5.0, 1], [5, 2], [5, 3], [5, 4]]))
        b = discretize(d, DiscretizationPolicy.median())
        np.testing.assert_array_equal(b.values[:, 0], [0, 0, 0, 0])

    def test_already_binary_rejects_other_values(self):
        d = Dataset(np.array([[0.0, 2.0], [1.0, 0.0]]))
        with pytest.raises(PolicyViolationError):
            discretize(d, DiscretizationPolicy.already_binary())

    def test_already_binary_idempotent(self):
        d = Dataset(np.array([[0.0, 1], [1, 0], [1, 1]]))
        once = discretize(d, DiscretizationPolicy.already_binary())
        again = discretize(
            Dataset(once.values.astype(np.float64)), DiscretizationPolicy.already_binary()
        )
        np.testing.assert_array_equal(once.values, again.values)

    def test_source_untouched(self):
        values = np.array([[1.0, 4.0], [3.0, 2.0]])
        d = Dataset(values)
        discretize(d, DiscretizationPolicy.median())
        np.testing.assert_array_equal(d.values, values)

    def test_fixed_requires_finite_threshold(self):
        with pytest.raises(ValueError):
            DiscretizationPolicy.fixed(float("inf"))


class TestSplit:
    def test_sizes(self):
        d = Dataset(np.arange(20.0).reshape(10, 2), labels=np.arange(10) % 2)
        train, valid, test = split(d, 0.8, 0.1, seed=3)
        assert (train.n_samples, valid.n_samples, test.n_samples) == (8, 1, 1)

    def test_deterministic(self):
        d = Dataset(np.arange(40.0).reshape(20, 2))
        a = split(d, 0.5, 0.25, seed=7)
        b = split(d, 0.5, 0.25, seed=7)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.values, y.values)

    def test_bad_fractions(self):
        d = Dataset(np.arange(20.0).reshape(10, 2))
        with pytest.raises(ValueError):
            split(d, 1.0, 0.0, seed=0)
        with pytest.raises(ValueError):
            split(d, 0.5, 0.6, seed=0)

    @given(
        n=st.integers(min_value=3, max_value=60),
        train_frac=st.floats(min_value=0.1, max_value=0.7),
        valid_frac=st.floats(min_value=0.0, max_value=0.2),
        seed=st.integers(min_value=0, max_value=1000),
    )
    @settings(max_examples=60, deadline=None)
    def test_partition_property(self, n, train_frac, valid_frac, seed):
        d = Dataset(np.arange(n, dtype=np.float64).repeat(2).reshape(n, 2))
        pieces = split(d, train_frac, valid_frac, seed)
        rows = [tuple(p.values[i]) for p in pieces if p is not None for i in range(p.n_samples)]
        assert len(rows) == n
        assert len(set(rows)) == n  # disjoint and complete


class TestDatasetInvariants:
    def test_needs_two_features(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((3, 1)))

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((2, 2)), feature_names=("a", "a"))

    def test_label_count_must_match(self):
        with pytest.raises(ValueError):
            Dataset(np.ones((3, 2)), labels=np.array([0, 1]))

    def test_values_are_readonly(self):
        d = Dataset(np.ones((2, 2)))
        with pytest.raises(ValueError):
            d.values[0, 0] = 5.0
