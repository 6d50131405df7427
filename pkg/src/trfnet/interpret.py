"""Characterizing hidden units by correlated inputs and embedding coherence.

A top-layer unit is described by the input features whose raw values
correlate most strongly (by absolute Pearson correlation) with the unit's
post-activation output.  When features are words with pretrained embeddings,
a unit's coherence is the mean pairwise cosine similarity among its top
features, and the model score averages that over the top layer.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .builder import TrfNetwork
from .data import Dataset
from .errors import DataFormatError, DegenerateUnitWarning, NoCoverageError
from .nn import hidden_representation


@dataclass(frozen=True)
class EmbeddingTable:
    """Token -> vector map, all vectors of one dimension."""

    dim: int
    vectors: dict[str, np.ndarray]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"embedding dim must be >= 1, got {self.dim}")
        for token, vec in self.vectors.items():
            if vec.shape != (self.dim,):
                raise ValueError(f"token {token!r} has vector of shape {vec.shape}")


def load_embeddings(path) -> EmbeddingTable:
    """Text format: first line "count dim", then "token x1 ... xdim" lines."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataFormatError(f"{path}: line 1: expected 'count dim'")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise DataFormatError(f"{path}: line 1: expected two integers") from None
        vectors: dict[str, np.ndarray] = {}
        for lineno, ln in enumerate(fh, start=2):
            if ln.strip() == "":
                continue
            parts = ln.split()
            if len(parts) != dim + 1:
                raise DataFormatError(
                    f"{path}: line {lineno}: expected token plus {dim} numbers"
                )
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                raise DataFormatError(f"{path}: line {lineno}: bad number") from None
            vectors[parts[0]] = vec
    if len(vectors) != count:
        raise DataFormatError(f"{path}: header promised {count} tokens, found {len(vectors)}")
    return EmbeddingTable(dim=dim, vectors=vectors)


def _pearson_columns(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Correlation of each column of x with y; zero-variance columns get 0."""
    xc = x - x.mean(axis=0)
    yc = y - y.mean()
    sx = np.sqrt((xc**2).sum(axis=0))
    sy = float(np.sqrt((yc**2).sum()))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (xc.T @ yc) / (sx * sy)
    return np.where((sx > 0) & (sy > 0), r, 0.0)


def unit_activations(net: TrfNetwork, d: Dataset) -> np.ndarray:
    """Top-layer activations over a dataset, eval mode."""
    if d.n_features != net.input_width:
        raise ValueError(f"data width {d.n_features} != network input {net.input_width}")
    return hidden_representation(net.layers, d.values)


def top_correlated_features(net: TrfNetwork, d: Dataset, unit: int, k: int) -> list[tuple[int, float]]:
    """The min(k, V) features most correlated with one top-layer unit.

    Returns (feature index, correlation) pairs sorted by |correlation|
    descending, ties by index.  A constant unit triggers a warning and an
    all-zero ranking.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    acts = unit_activations(net, d)
    if not 0 <= unit < acts.shape[1]:
        raise ValueError(f"unit {unit} out of range for top width {acts.shape[1]}")
    y = acts[:, unit]
    if np.ptp(y) == 0.0:
        warnings.warn(f"unit {unit} has constant activation", DegenerateUnitWarning)
    r = _pearson_columns(d.values, y)
    order = np.lexsort((np.arange(r.size), -np.abs(r)))
    return [(int(j), float(r[j])) for j in order[: min(k, r.size)]]


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    # identical vectors score exactly 1 so degenerate test embeddings behave
    if np.array_equal(a, b):
        return 1.0
    denom = float(np.sqrt(a @ a) * np.sqrt(b @ b))
    if denom == 0.0:
        return 0.0
    return float(a @ b) / denom


def unit_interpretability(names: list[str], emb: EmbeddingTable) -> float | None:
    """Mean pairwise cosine among the named tokens found in the table.

    Pairs with a missing token are skipped; None means no scorable pair.
    """
    present = [emb.vectors[n] for n in names if n in emb.vectors]
    if len(present) < 2:
        return None
    sims = [
        _cosine(present[i], present[j])
        for i in range(len(present))
        for j in range(i + 1, len(present))
    ]
    return float(np.mean(sims))


def interpretability_score(net: TrfNetwork, d: Dataset, emb: EmbeddingTable, k: int) -> float:
    """Mean unit coherence over top-layer units with at least one scored pair."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if d.feature_names is None:
        raise ValueError("interpretability needs feature names")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateUnitWarning)
        per_unit = []
        for unit in range(net.top_width):
            top = top_correlated_features(net, d, unit, k)
            names = [d.feature_names[j] for j, _ in top]
            score = unit_interpretability(names, emb)
            if score is not None:
                per_unit.append(score)
    if not per_unit:
        raise NoCoverageError("no top-layer unit has an embedding-covered feature pair")
    return float(np.mean(per_unit))
