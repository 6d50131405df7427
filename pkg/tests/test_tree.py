import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_path_tree, make_star_tree, random_binary_dataset, tree_from_edges
from oracles import (
    all_spanning_trees,
    best_tree_weight,
    floyd_warshall_hops,
    tree_loglik_reference,
)
from trfnet.data import BinaryDataset, Dataset, DiscretizationPolicy
from trfnet.stats import MiMatrix, empirical_mi, pair_counts
from trfnet.synth import markov_chain
from trfnet.tree import (
    ChowLiuTree,
    chow_liu,
    hop_distances,
    max_log_likelihood,
    max_spanning_tree,
    to_dot,
)


def symmetric(entries, n):
    w = np.zeros((n, n))
    for u, v, x in entries:
        w[u, v] = w[v, u] = x
    return MiMatrix(w)


def random_mi_matrix(n, seed):
    rng = np.random.default_rng(seed)
    w = np.triu(rng.random((n, n)), k=1)
    return MiMatrix(w + w.T)


def as_binary(d: Dataset) -> BinaryDataset:
    return BinaryDataset(d.values.astype(np.int8), source=d)


random_trees = st.integers(3, 10).flatmap(
    lambda n: st.tuples(
        st.just(n), st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2)
    )
)


class TestMaxSpanningTree:
    def test_triangle_drops_weakest_edge(self):
        m = symmetric([(0, 1, 0.5), (0, 2, 0.3), (1, 2, 0.1)], 3)
        t = max_spanning_tree(m)
        assert t.edge_pairs() == {(0, 1), (0, 2)}

    def test_equal_weights_lexicographic_star(self):
        m = symmetric([(u, v, 0.25) for u in range(4) for v in range(u + 1, 4)], 4)
        t = max_spanning_tree(m)
        assert t.edge_pairs() == {(0, 1), (0, 2), (0, 3)}

    def test_matches_exhaustive_enumeration(self):
        for seed in range(6):
            m = random_mi_matrix(6, seed)
            t = max_spanning_tree(m)
            total = sum(w for _, _, w in t.edges)
            assert total == pytest.approx(best_tree_weight(m.m), abs=1e-12)

    def test_root_and_parents(self):
        t = max_spanning_tree(random_mi_matrix(7, 3))
        assert t.root == 0
        assert t.parent[0] == -1
        assert sum(1 for p in t.parent if p != -1) == 6

    def test_asymmetric_rejected(self):
        w = np.zeros((3, 3))
        w[0, 1] = 1.0
        with pytest.raises(ValueError):
            max_spanning_tree(MiMatrix(w))

    @given(st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_permutation_stable_with_distinct_weights(self, seed):
        rng = np.random.default_rng(seed)
        n = 6
        # distinct weights: a random permutation of well-separated values
        vals = np.arange(1, n * (n - 1) // 2 + 1, dtype=np.float64)
        rng.shuffle(vals)
        w = np.zeros((n, n))
        w[np.triu_indices(n, 1)] = vals
        w = w + w.T
        base = max_spanning_tree(MiMatrix(w)).edge_pairs()
        perm = rng.permutation(n)
        wp = w[np.ix_(perm, perm)]
        mapped_back = {
            (min(perm[u], perm[v]), max(perm[u], perm[v]))
            for u, v in max_spanning_tree(MiMatrix(wp)).edge_pairs()
        }
        assert mapped_back == base


class TestChowLiu:
    def test_chain_recovery(self):
        d = markov_chain(8, 1500, flip_prob=0.1, seed=5)
        t = chow_liu(d, DiscretizationPolicy.already_binary())
        assert t.edge_pairs() == {(i, i + 1) for i in range(7)}

    def test_duplicated_pair_is_an_edge(self):
        rng = np.random.default_rng(1)
        a = (rng.random(400) < 0.5).astype(float)
        c = (rng.random(400) < 0.5).astype(float)
        d = Dataset(np.column_stack([a, a, c]))
        t = chow_liu(d, DiscretizationPolicy.already_binary())
        assert (0, 1) in t.edge_pairs()

    def test_two_features_single_edge(self):
        d = random_binary_dataset(50, 2, seed=2)
        t = chow_liu(d, DiscretizationPolicy.already_binary())
        assert t.edge_pairs() == {(0, 1)}

    def test_stored_weights_are_mi(self):
        d = random_binary_dataset(120, 5, seed=8)
        t = chow_liu(d, DiscretizationPolicy.already_binary())
        bd = as_binary(d)
        for u, v, w in t.edges:
            assert w == pytest.approx(empirical_mi(pair_counts(bd, u, v)), abs=1e-12)


class TestHopDistances:
    def test_path(self):
        t = make_path_tree(4)
        np.testing.assert_array_equal(hop_distances(t, 0), [0, 1, 2, 3])

    def test_star(self):
        t = make_star_tree(4)
        np.testing.assert_array_equal(hop_distances(t, 0), [0, 1, 1, 1, 1])

    @given(random_trees)
    @settings(max_examples=50, deadline=None)
    def test_matches_floyd_warshall(self, tree_spec):
        n, seq = tree_spec
        from oracles import prufer_edges

        edges = prufer_edges(seq, n) if n > 2 else [(0, 1)]
        t = tree_from_edges(n, edges)
        ref = floyd_warshall_hops(n, [(u, v) for u, v, _ in t.edges])
        for src in range(n):
            np.testing.assert_array_equal(hop_distances(t, src), ref[src])

    @given(random_trees, st.integers(0, 10**6))
    @settings(max_examples=30, deadline=None)
    def test_tree_metric_along_paths(self, tree_spec, pick):
        n, seq = tree_spec
        from oracles import prufer_edges

        edges = prufer_edges(seq, n) if n > 2 else [(0, 1)]
        t = tree_from_edges(n, edges)
        rng = np.random.default_rng(pick)
        u, w = rng.integers(n), rng.integers(n)
        du = hop_distances(t, int(u))
        # walk the u->w path; every node v on it satisfies d(u,w) = d(u,v) + d(v,w)
        dw = hop_distances(t, int(w))
        on_path = np.flatnonzero(du + dw == du[w])
        assert int(u) in on_path and int(w) in on_path
        assert on_path.size == du[w] + 1


class TestMaxLogLikelihood:
    def test_constant_features_zero(self):
        values = np.column_stack([np.ones(30), np.zeros(30), np.ones(30)])
        d = Dataset(values)
        bd = as_binary(d)
        t = tree_from_edges(3, [(0, 1), (1, 2)])
        assert max_log_likelihood(t, bd) == 0.0

    def test_edge_swap_decreases(self):
        d = markov_chain(4, 800, flip_prob=0.1, seed=9)
        bd = as_binary(d)
        best = chow_liu(d, DiscretizationPolicy.already_binary())
        worse = tree_from_edges(4, [(0, 1), (1, 2), (0, 3)])  # (2,3) swapped for (0,3)
        assert best.edge_pairs() == {(0, 1), (1, 2), (2, 3)}
        assert max_log_likelihood(best, bd) > max_log_likelihood(worse, bd)

    def test_matches_plugin_cpt_evaluation(self):
        d = random_binary_dataset(150, 4, seed=3)
        bd = as_binary(d)
        t = chow_liu(d, DiscretizationPolicy.already_binary())
        ref = tree_loglik_reference(t.parent.tolist(), t.root, d.values.tolist())
        assert max_log_likelihood(t, bd) == pytest.approx(ref, rel=1e-9, abs=1e-9)

    def test_chow_liu_is_optimal_over_all_trees(self):
        d = random_binary_dataset(100, 5, seed=4)
        bd = as_binary(d)
        best = chow_liu(d, DiscretizationPolicy.already_binary())
        best_ll = max_log_likelihood(best, bd)
        for edges in all_spanning_trees(5):
            other = tree_from_edges(5, edges)
            assert best_ll >= max_log_likelihood(other, bd) - 1e-9


class TestTreeType:
    def test_cycle_rejected(self):
        with pytest.raises(ValueError):
            ChowLiuTree(
                node_count=3,
                edges=((0, 1, 1.0), (0, 1, 1.0)),
                root=0,
                parent=np.array([-1, 0, 0]),
            )

    def test_parent_consistency_checked(self):
        with pytest.raises(ValueError):
            ChowLiuTree(
                node_count=3,
                edges=((0, 1, 1.0), (1, 2, 1.0)),
                root=0,
                parent=np.array([-1, 0, 0]),  # (2, 0) is not an edge
            )

    def test_dot_export_shape(self):
        t = make_path_tree(4)
        dot = to_dot(t, ["a", "b", "c", "d"])
        assert dot.count("--") == 3
        assert 'label="a"' in dot and 'label="1.0000"' in dot
