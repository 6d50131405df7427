"""Covering a feature tree with receptive fields and emitting connectivity masks.

A receptive field is the <= r hop ball around a center node.  Centers are
chosen greedily: the first uniformly at random (seeded), each later one the
lowest-indexed node whose minimum hop distance to the chosen centers is
exactly the stride.  One mask row per field, plus optional all-ones rows for
global units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyStructureError
from .tree import ChowLiuTree, hop_distances


@dataclass(frozen=True)
class ReceptiveFieldPlan:
    """Ordered centers with their member-node sets plus a global-unit count."""

    radius: int
    stride: int
    centers: tuple[int, ...]
    fields: tuple[tuple[int, ...], ...]
    global_count: int

    def __post_init__(self):
        if len(self.centers) != len(set(self.centers)):
            raise ValueError("centers must be distinct")
        if len(self.fields) != len(self.centers):
            raise ValueError("need exactly one field per center")
        if self.global_count < 0:
            raise ValueError("global_count must be nonnegative")

    @property
    def hidden_count(self) -> int:
        return len(self.centers) + self.global_count

    def to_text(self) -> str:
        """One line per hidden unit, for eyeballing learned structures."""
        lines = []
        for c, members in zip(self.centers, self.fields):
            lines.append(f"center={c} r={self.radius} members={list(members)}")
        lines.extend(["global"] * self.global_count)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ConnectivityMask:
    """H x V binary connection matrix; row_kind tags each row trf or global."""

    a: np.ndarray
    row_kind: tuple[str, ...]

    def __post_init__(self):
        a = np.array(self.a, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError("mask must be 2-D")
        if len(self.row_kind) != a.shape[0]:
            raise ValueError("need one row_kind per mask row")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("mask entries must be 0 or 1")
        if (a.sum(axis=1) == 0).any():
            raise ValueError("mask has an all-zero row")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def hidden_count(self) -> int:
        return self.a.shape[0]

    @property
    def visible_count(self) -> int:
        return self.a.shape[1]

    def density(self) -> float:
        return float(self.a.sum()) / self.a.size


def select_centers(t: ChowLiuTree, s: int, seed: int) -> list[int]:
    """Greedy stride-s center choice; deterministic given (tree, s, seed)."""
    if s < 1:
        raise ValueError(f"stride must be >= 1, got {s}")
    rng = np.random.default_rng(seed)
    first = int(rng.integers(t.node_count))
    centers = [first]
    min_dist = hop_distances(t, first)
    while True:
        candidates = np.flatnonzero(min_dist == s)
        if candidates.size == 0:
            break
        c = int(candidates[0])
        centers.append(c)
        np.minimum(min_dist, hop_distances(t, c), out=min_dist)
    return centers


def extract_field(t: ChowLiuTree, center: int, r: int) -> tuple[int, ...]:
    """All nodes within r hops of the center, ascending."""
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    dist = hop_distances(t, center)
    return tuple(int(v) for v in np.flatnonzero(dist <= r))


def build_masks(
    t: ChowLiuTree,
    r: int,
    s: int,
    global_fraction: float,
    seed: int,
) -> tuple[ReceptiveFieldPlan, ConnectivityMask]:
    """Plan receptive fields over the tree and emit the layer's connectivity.

    Rows are ordered field rows first (center order), then global all-ones
    rows.  global_count rounds half-up from global_fraction * #centers, with
    a floor of one whenever global_fraction > 0.  If the stride leaves nodes
    outside every ball (possible once s > r + 1), each such node is appended
    to the field of the nearest center, ties to the earliest center, so no
    input unit is silently dropped.
    """
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    if not 0.0 <= global_fraction <= 1.0:
        raise ValueError(f"global_fraction must be in [0, 1], got {global_fraction}")
    centers = select_centers(t, s, seed)
    dists = np.stack([hop_distances(t, c) for c in centers])
    fields = [set(np.flatnonzero(dists[i] <= r).tolist()) for i in range(len(centers))]
    covered = np.zeros(t.node_count, dtype=bool)
    for f in fields:
        covered[list(f)] = True
    for v in np.flatnonzero(~covered):
        fields[int(np.argmin(dists[:, v]))].add(int(v))

    global_count = int(np.floor(global_fraction * len(centers) + 0.5))
    if global_fraction > 0 and centers:
        global_count = max(1, global_count)
    h = len(centers) + global_count
    if h == 0:
        raise EmptyStructureError("layer has no hidden units")

    a = np.zeros((h, t.node_count), dtype=np.uint8)
    for i, f in enumerate(fields):
        a[i, sorted(f)] = 1
    a[len(centers) :, :] = 1
    plan = ReceptiveFieldPlan(
        radius=r,
        stride=s,
        centers=tuple(centers),
        fields=tuple(tuple(sorted(f)) for f in fields),
        global_count=global_count,
    )
    kinds = ("trf",) * len(centers) + ("global",) * global_count
    return plan, ConnectivityMask(a, kinds)
