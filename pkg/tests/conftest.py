import numpy as np
import pytest

from trfnet.data import Dataset
from trfnet.stats import MiMatrix
from trfnet.tree import ChowLiuTree, max_spanning_tree


def make_path_tree(n: int) -> ChowLiuTree:
    """The path 0-1-...-(n-1) with descending weights so the MST is forced."""
    w = np.zeros((n, n))
    for i in range(n - 1):
        w[i, i + 1] = w[i + 1, i] = 1.0 - 0.01 * i
    return max_spanning_tree(MiMatrix(w))


def make_star_tree(leaves: int) -> ChowLiuTree:
    """Hub node 0 connected to `leaves` leaf nodes."""
    n = leaves + 1
    w = np.zeros((n, n))
    for leaf in range(1, n):
        w[0, leaf] = w[leaf, 0] = 1.0
    return max_spanning_tree(MiMatrix(w))


def tree_from_edges(n: int, edges) -> ChowLiuTree:
    """Any explicit edge list as a ChowLiuTree with unit weights."""
    w = np.zeros((n, n))
    for u, v in edges:
        w[u, v] = w[v, u] = 1.0
    return max_spanning_tree(MiMatrix(w))


def seed_with_first_center(node_count: int, target: int, limit: int = 100000) -> int:
    """Smallest seed whose uniform first-center draw lands on target."""
    for seed in range(limit):
        if int(np.random.default_rng(seed).integers(node_count)) == target:
            return seed
    raise AssertionError(f"no seed below {limit} picks node {target} of {node_count}")


@pytest.fixture(scope="session")
def blob_data():
    from trfnet.data import split
    from trfnet.synth import gaussian_blobs

    d = gaussian_blobs(n_samples=400, n_features=8, separation=6.0, seed=11)
    train, valid, test = split(d, 0.7, 0.15, seed=0)
    return train, valid, test


@pytest.fixture(scope="session")
def small_corpus():
    """A quick 300-doc, 120-word, 3-class bag-of-words corpus."""
    from trfnet.synth import news_corpus

    return news_corpus(n_docs=300, vocab_size=120, n_classes=3, block_size=8, seed=1)


def random_binary_dataset(n: int, v: int, seed: int) -> Dataset:
    rng = np.random.default_rng(seed)
    values = (rng.random((n, v)) < rng.uniform(0.2, 0.8, size=v)).astype(np.float64)
    return Dataset(values)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance criteria results where capture cannot hide them."""
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in RESULT_LINES:
            terminalreporter.write_line(line)
