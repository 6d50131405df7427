"""Maximum-weight spanning trees over mutual information, and tree scoring.

The learned tree is the classic Chow-Liu structure: weight every feature
pair by its empirical mutual information and keep a maximum-weight spanning
tree.  Kruskal's algorithm with a fixed tie order makes the result
deterministic; the root is always node 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .data import BinaryDataset, Dataset, DiscretizationPolicy, discretize
from .stats import MiMatrix, empirical_mi, marginal_log_prob_sum, mi_matrix, pair_counts

NO_PARENT = -1

# weights this close to zero are treated as exact ties at zero, so float
# noise cannot reorder otherwise-equal edges
WEIGHT_CLAMP = 1e-12


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class ChowLiuTree:
    """A spanning tree over V feature nodes.

    edges hold (u, v, weight) with u < v, sorted by (u, v); parent encodes
    the same tree rooted at ``root`` with parent[root] = NO_PARENT.
    """

    node_count: int
    edges: tuple[tuple[int, int, float], ...]
    root: int
    parent: np.ndarray

    def __post_init__(self):
        v = self.node_count
        if v < 2:
            raise ValueError(f"need at least 2 nodes, got {v}")
        if len(self.edges) != v - 1:
            raise ValueError(f"expected {v - 1} edges, got {len(self.edges)}")
        uf = _UnionFind(v)
        for u, w, weight in self.edges:
            if not (0 <= u < w < v):
                raise ValueError(f"bad edge ({u}, {w}): need 0 <= u < v < {v}")
            if weight < 0:
                raise ValueError(f"edge ({u}, {w}) has negative weight {weight}")
            if not uf.union(u, w):
                raise ValueError(f"edge ({u}, {w}) closes a cycle")
        parent = np.array(self.parent, dtype=np.int64)
        if parent.shape != (v,):
            raise ValueError("parent array must have one entry per node")
        if parent[self.root] != NO_PARENT:
            raise ValueError("parent[root] must be the NO_PARENT sentinel")
        edge_set = {(u, w) for u, w, _ in self.edges}
        for child in range(v):
            if child == self.root:
                continue
            pair = (min(child, int(parent[child])), max(child, int(parent[child])))
            if pair not in edge_set:
                raise ValueError(f"parent link {pair} is not a tree edge")
        parent.setflags(write=False)
        object.__setattr__(self, "parent", parent)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def edge_pairs(self) -> set[tuple[int, int]]:
        return {(u, v) for u, v, _ in self.edges}


def _parents_from_edges(node_count, edge_list, root):
    adj: list[list[int]] = [[] for _ in range(node_count)]
    for u, v in edge_list:
        adj[u].append(v)
        adj[v].append(u)
    parent = np.full(node_count, NO_PARENT, dtype=np.int64)
    seen = np.zeros(node_count, dtype=bool)
    seen[root] = True
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                queue.append(v)
    return parent


def max_spanning_tree(m: MiMatrix) -> ChowLiuTree:
    """Kruskal over edges sorted by weight descending, ties by (u, v) ascending."""
    w = m.m
    if not np.array_equal(w, w.T):
        raise ValueError("weight matrix must be symmetric")
    v = m.n_features
    iu, ju = np.triu_indices(v, k=1)
    weights = w[iu, ju].copy()
    weights[np.abs(weights) < WEIGHT_CLAMP] = 0.0
    # lexsort's last key is primary: -weight first, then u, then v
    order = np.lexsort((ju, iu, -weights))
    uf = _UnionFind(v)
    chosen = []
    for k in order:
        u, t = int(iu[k]), int(ju[k])
        if uf.union(u, t):
            chosen.append((u, t, float(weights[k])))
            if len(chosen) == v - 1:
                break
    chosen.sort(key=lambda e: (e[0], e[1]))
    parent = _parents_from_edges(v, [(u, t) for u, t, _ in chosen], root=0)
    return ChowLiuTree(v, tuple(chosen), root=0, parent=parent)


def chow_liu_from_binary(bd: BinaryDataset) -> ChowLiuTree:
    """Mutual-information maximum spanning tree of an already-binary dataset."""
    return max_spanning_tree(mi_matrix(bd))


def chow_liu(d: Dataset, policy: DiscretizationPolicy) -> ChowLiuTree:
    """Discretize, weight pairs by mutual information, keep the best tree."""
    return chow_liu_from_binary(discretize(d, policy))


def hop_distances(t: ChowLiuTree, source: int) -> np.ndarray:
    """Tree hop distance from source to every node, by breadth-first traversal."""
    if not (0 <= source < t.node_count):
        raise ValueError(f"source {source} out of range for {t.node_count} nodes")
    adj = t.adjacency()
    dist = np.full(t.node_count, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def max_log_likelihood(t: ChowLiuTree, d: BinaryDataset) -> float:
    """Data log-likelihood of the tree structure at its best-fitting parameters.

    Equals N * (sum_t sum_k p_hat ln p_hat  +  sum_edges mutual information):
    the marginal term is structure independent, so trees are ranked purely by
    their total edge mutual information.
    """
    if t.node_count != d.n_features:
        raise ValueError(
            f"tree has {t.node_count} nodes but data has {d.n_features} features"
        )
    edge_mi = sum(empirical_mi(pair_counts(d, u, v)) for u, v, _ in t.edges)
    return d.n_samples * (marginal_log_prob_sum(d) + edge_mi)


def to_dot(t: ChowLiuTree, feature_names=None) -> str:
    """Graphviz rendering; edge labels are mutual information to 4 decimals."""
    names = feature_names or [str(i) for i in range(t.node_count)]
    if len(names) != t.node_count:
        raise ValueError(f"expected {t.node_count} names, got {len(names)}")
    lines = ["graph chowliu {"]
    for i, name in enumerate(names):
        lines.append(f'  n{i} [label="{name}"];')
    for u, v, w in t.edges:
        lines.append(f'  n{u} -- n{v} [label="{w:.4f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
