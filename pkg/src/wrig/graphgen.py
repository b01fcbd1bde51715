"""Bipartite membership graphs and their intersection-graph projection."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _rng
from .weights import WeightDistribution, sample_weights


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; the group count is ``m = floor(beta * n**alpha)``."""

    n: int
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        for name in ("alpha", "beta", "gamma"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.m < 1:
            raise ValueError(
                f"floor(beta * n**alpha) = 0 for n={self.n}, alpha={self.alpha}, "
                f"beta={self.beta}; the model needs at least one group")

    @property
    def m(self) -> int:
        raw = self.beta * float(self.n) ** self.alpha
        # absorb the last-ulp error of pow so that e.g. 0.25 * 1e4 -> 2500, not 2499
        return int(math.floor(raw * (1.0 + 4 * np.finfo(float).eps)))

    @property
    def scale(self) -> float:
        """``gamma * n**(-(1+alpha)/2)``, the membership probability per unit weight."""
        return self.gamma * float(self.n) ** (-(1.0 + self.alpha) / 2.0)


def membership_prob(params: ModelParams, w):
    """``min(gamma * w * n**(-(1+alpha)/2), 1)``, elementwise."""
    p = np.minimum(params.scale * np.asarray(w, dtype=float), 1.0)
    return float(p) if p.ndim == 0 else p


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Vertex-group incidences, stored group-major.

    ``group_ids`` and ``members`` are parallel arrays sorted by (group, vertex);
    only nonempty groups appear, so memory scales with the incidence count
    rather than with ``m``.
    """

    n: int
    m: int
    group_ids: np.ndarray
    members: np.ndarray
    vertex_group_counts: np.ndarray

    @classmethod
    def from_memberships(cls, n: int, memberships) -> "BipartiteGraph":
        """Build from a list of member lists, one per group (0-based ids)."""
        groups, verts = [], []
        for a, lst in enumerate(memberships):
            lst = sorted(set(int(v) for v in lst))
            if lst and (lst[0] < 0 or lst[-1] >= n):
                raise ValueError(f"group {a} has a vertex outside [0, {n})")
            groups.extend([a] * len(lst))
            verts.extend(lst)
        return cls._from_incidences(n, len(memberships), np.array(groups, dtype=np.int64),
                                    np.array(verts, dtype=np.int64))

    @classmethod
    def _from_incidences(cls, n, m, groups, verts):
        order = np.lexsort((verts, groups))
        groups, verts = groups[order], verts[order]
        counts = np.bincount(verts, minlength=n).astype(np.int64)
        return cls(n, m, groups, verts, counts)

    @property
    def incidence_count(self) -> int:
        return int(self.members.size)

    def group_members(self, a: int) -> np.ndarray:
        lo, hi = np.searchsorted(self.group_ids, [a, a + 1])
        return self.members[lo:hi]

    def memberships(self) -> list[np.ndarray]:
        """Member list of every group, empty groups included."""
        bounds = np.searchsorted(self.group_ids, np.arange(self.m + 1))
        return [self.members[bounds[a]:bounds[a + 1]] for a in range(self.m)]

    def group_sizes(self) -> tuple[np.ndarray, np.ndarray]:
        """``(group ids, sizes)`` of the nonempty groups."""
        ids, sizes = np.unique(self.group_ids, return_counts=True)
        return ids, sizes


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph in CSR form with sorted neighbour lists.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``, sorted
    lexicographically.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    edges: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        u, v = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
        keep = u != v
        keys = np.unique(u[keep] * n + v[keep])
        return cls._from_keys(n, keys)

    @classmethod
    def _from_keys(cls, n, keys):
        u, v = keys // n, keys % n
        edges = np.stack([u, v], axis=1)
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        indices = dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, indices, edges)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < nb.size and nb[k] == j)


def _distinct_groups(rng: np.random.Generator, counts: np.ndarray, m: int):
    """For each row draw ``counts[r]`` distinct groups uniformly from ``range(m)``.

    Returns ``(row, group)`` incidence arrays.  Rows needing a large share of
    the groups are drawn directly without replacement; the rest are drawn with
    replacement and collisions redrawn until none remain.  The redraw rule
    treats all group labels alike, so the resulting subset is uniform.
    """
    counts = np.asarray(counts, dtype=np.int64)
    dense = counts * 4 > m
    rows_out, groups_out = [], []
    for r in np.flatnonzero(dense):
        c = int(counts[r])
        g = np.arange(m, dtype=np.int64) if c == m else rng.choice(m, c, replace=False)
        rows_out.append(np.full(c, r, dtype=np.int64))
        groups_out.append(np.asarray(g, dtype=np.int64))

    sparse = np.where(dense, 0, counts)
    owner = np.repeat(np.arange(counts.size, dtype=np.int64), sparse)
    grp = rng.integers(0, m, size=owner.size, dtype=np.int64)
    while owner.size:
        key = owner * m + grp
        order = np.argsort(key, kind="stable")
        ks = key[order]
        dup = np.zeros(ks.size, dtype=bool)
        dup[1:] = ks[1:] == ks[:-1]
        if not dup.any():
            break
        redo = order[dup]
        grp[redo] = rng.integers(0, m, size=redo.size, dtype=np.int64)
    rows_out.append(owner)
    groups_out.append(grp)
    return np.concatenate(rows_out), np.concatenate(groups_out)


def generate_bipartite(params: ModelParams, weights, seed: int,
                       workers: int | None = None) -> BipartiteGraph:
    """Sample B(n, m, F) given the vertex weights.

    Each vertex-group incidence is an independent Bernoulli(p_i).  Sampling is
    vertex-major: vertex ``i`` joins ``Binomial(m, p_i)`` groups chosen
    uniformly without replacement, which is the same law.
    """
    w = np.asarray(weights, dtype=float)
    n, m = params.n, params.m
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got shape {w.shape}")
    p = membership_prob(params, w)

    def block(rng, start, stop):
        c = rng.binomial(m, p[start:stop])
        rows, groups = _distinct_groups(rng, c, m)
        return rows + start, groups

    parts = _rng.map_blocks(block, seed, _rng.MEMBERSHIP, n, workers=workers)
    verts = np.concatenate([pr[0] for pr in parts])
    groups = np.concatenate([pr[1] for pr in parts])
    return BipartiteGraph._from_incidences(n, m, groups, verts)


def project(b: BipartiteGraph) -> Graph:
    """Intersection graph: ``i ~ j`` iff some group contains both."""
    n = b.n
    starts = np.flatnonzero(np.r_[True, b.group_ids[1:] != b.group_ids[:-1]]) \
        if b.group_ids.size else np.empty(0, dtype=np.int64)
    sizes = np.diff(np.r_[starts, b.group_ids.size])
    big = sizes >= 2
    if not big.any():
        return Graph._from_keys(n, np.empty(0, dtype=np.int64))
    starts, sizes = starts[big], sizes[big]
    # position r inside a group of size s pairs with the s - r - 1 later members
    pos = np.arange(sizes.sum()) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    first = np.repeat(starts, sizes) + pos
    reps = np.repeat(sizes, sizes) - pos - 1
    left = np.repeat(first, reps)
    block_start = np.repeat(np.cumsum(reps) - reps, reps)
    right = left + 1 + (np.arange(left.size) - block_start)
    u, v = b.members[left], b.members[right]
    keys = np.unique(np.minimum(u, v) * n + np.maximum(u, v))
    return Graph._from_keys(n, keys)


def generate(params: ModelParams, dist: WeightDistribution, seed: int,
             workers: int | None = None):
    """Weights, bipartite graph and projected graph from one seed."""
    w = sample_weights(dist, params.n, seed, workers=workers)
    b = generate_bipartite(params, w, seed, workers=workers)
    return w, b, project(b)
