"""Empirical estimators on generated graphs and the Monte Carlo validation harness."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np
from scipy import special
from scipy.stats import binom

from . import _rng, __version__
from .exact import conditional_triangle_exact, edge_prob_exact, isolated_prob_exact
from .graphgen import Graph, ModelParams, generate, membership_prob
from .limits import Regime, clustering_limit, expected_degree_limit, marginal_degree_pmf
from .weights import Degenerate, WeightDistribution


class UndefinedStatistic(ValueError):
    """The estimator's denominator is zero."""


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class DegreeHistogram:
    counts: np.ndarray
    n: int

    @classmethod
    def from_degrees(cls, degrees) -> "DegreeHistogram":
        d = np.asarray(degrees, dtype=np.int64)
        return cls(np.bincount(d, minlength=1), int(d.size))

    @property
    def pmf(self) -> np.ndarray:
        return self.counts / self.n

    def mean(self) -> float:
        return float(np.arange(self.counts.size) @ self.counts) / self.n


def degree_histogram(g: Graph) -> DegreeHistogram:
    return DegreeHistogram.from_degrees(g.degrees)


def _pairs(starts, sizes):
    """All index pairs ``(x, y)``, ``x < y``, inside each block [start, start+size)."""
    if sizes.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    pos = np.arange(sizes.sum()) - np.repeat(np.cumsum(sizes) - sizes, sizes)
    first = np.repeat(starts, sizes) + pos
    reps = np.repeat(sizes, sizes) - pos - 1
    left = np.repeat(first, reps)
    right = left + 1 + np.arange(left.size) - np.repeat(np.cumsum(reps) - reps, reps)
    return left, right


def triangles_per_vertex(g: Graph) -> np.ndarray:
    """Number of triangles through each vertex.

    Edges are oriented from lower to higher (degree, id) rank; every triangle
    is then seen exactly once as a pair of out-neighbours of its lowest-ranked
    vertex, and the closing edge is looked up in the sorted edge array.
    """
    n = g.n
    if g.edge_count == 0:
        return np.zeros(n, dtype=np.int64)
    rank = np.empty(n, dtype=np.int64)
    rank[np.lexsort((np.arange(n), g.degrees))] = np.arange(n)
    u, v = g.edges[:, 0], g.edges[:, 1]
    flip = rank[u] > rank[v]
    src = np.where(flip, v, u)
    dst = np.where(flip, u, v)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    starts = np.flatnonzero(np.r_[True, src[1:] != src[:-1]])
    sizes = np.diff(np.r_[starts, src.size])
    keep = sizes >= 2
    left, right = _pairs(starts[keep], sizes[keep])
    a, b = dst[left], dst[right]
    keys = np.minimum(a, b) * n + np.maximum(a, b)
    edge_keys = g.edges[:, 0] * n + g.edges[:, 1]
    pos = np.searchsorted(edge_keys, keys)
    pos = np.minimum(pos, edge_keys.size - 1)
    closed = edge_keys[pos] == keys
    t = np.bincount(src[left][closed], minlength=n)
    t += np.bincount(a[closed], minlength=n)
    t += np.bincount(b[closed], minlength=n)
    return t


def triangle_count(g: Graph) -> int:
    return int(triangles_per_vertex(g).sum() // 3)


def transitivity(g: Graph) -> float:
    """``3 * triangles / (number of paths of length two)``."""
    d = g.degrees.astype(float)
    wedges = float(np.sum(d * (d - 1) / 2))
    if wedges == 0:
        raise UndefinedStatistic("graph has no path of length two")
    return float(triangles_per_vertex(g).sum() / wedges)


def transitivity_with_error(g: Graph) -> tuple[float, float]:
    """Transitivity and a delta-method standard error over vertices."""
    d = g.degrees.astype(float)
    w = d * (d - 1) / 2
    total = w.sum()
    if total == 0:
        raise UndefinedStatistic("graph has no path of length two")
    t = triangles_per_vertex(g).astype(float)
    r = t.sum() / total
    se = math.sqrt(float(np.sum((t - r * w) ** 2))) / total
    return float(r), se


@dataclass
class ClusteringEstimate:
    transitivity: float | None = None
    conditional_triple: float | None = None
    std_error: dict = field(default_factory=dict)
    replications: int = 0


# ---------------------------------------------------------------------------
# wedge-conditioned triple sampler
#
# Only groups holding at least two of the three labelled vertices matter.
# Their category counts (all three, exactly ij, exactly ik, exactly jk) are
# multinomial over the m groups.  The wedge event is rare for large n, so
# each replication draws the count vector directly from its law conditional
# on the wedge, by enumerating every count vector with at most K_max relevant
# groups.  K_max grows per row until the neglected mass is negligible next
# to the wedge probability; rows that would need more fall back to plain
# rejection sampling.

_K_LEVELS = (6, 12, 20)
_TRUNC_RTOL = 1e-10


def _count_vectors(k_max):
    rng = range(k_max + 1)
    c = np.array([v for v in product(rng, rng, rng, rng) if sum(v) <= k_max], dtype=np.int64)
    return c


_COMBOS = {k: _count_vectors(k) for k in _K_LEVELS}


def _wedge(c):
    return (c[..., 0] >= 1) | ((c[..., 2] >= 1) & (c[..., 3] >= 1))


def _triangle(c):
    return (c[..., 0] >= 1) | ((c[..., 1] >= 1) & (c[..., 2] >= 1) & (c[..., 3] >= 1))


def _categories(p):
    pi, pj, pk = p[:, 0], p[:, 1], p[:, 2]
    return np.stack([pi * pj * pk, pi * pj * (1 - pk), pi * (1 - pj) * pk,
                     (1 - pi) * pj * pk], axis=1)


def _enumerate_rows(q, m, k_max, u):
    combos = _COMBOS[k_max]
    tot = combos.sum(axis=1)
    wedge = _wedge(combos) & (tot <= m)
    combos, tot = combos[wedge], tot[wedge]
    big_q = q.sum(axis=1)
    # a huge finite stand-in for log 0 keeps 0 * log 0 = 0 in the matrix product
    with np.errstate(divide="ignore"):
        logq = np.where(q > 0, np.log(q), -1e300)
    # log multinomial probability of each count vector (rest in the last cell)
    lin = logq @ combos.T.astype(float)
    lp = (special.gammaln(m + 1.0) - special.gammaln(m - tot + 1.0)
          - special.gammaln(combos + 1.0).sum(axis=1))[None, :] + lin \
        + (m - tot)[None, :] * np.log1p(-big_q)[:, None]
    top = lp.max(axis=1, keepdims=True)
    w = np.exp(lp - top)
    cum = np.cumsum(w, axis=1)
    wedge_mass = np.exp(top[:, 0]) * cum[:, -1]
    neglected = binom.sf(k_max, m, big_q)
    ok = neglected <= _TRUNC_RTOL * wedge_mass
    pick = (cum < (u * cum[:, -1])[:, None]).sum(axis=1)
    pick = np.minimum(pick, combos.shape[0] - 1)
    return _triangle(combos[pick]), ok


def _rejection_rows(rng, q, m, max_rounds=1_000_000):
    """Draw whole count vectors for every row until each has hit the wedge."""
    probs = np.column_stack([q, np.clip(1.0 - q.sum(axis=1), 0.0, None)])
    out = np.zeros(q.shape[0], dtype=bool)
    todo = np.arange(q.shape[0])
    for _ in range(max_rounds):
        if todo.size == 0:
            return out
        c = rng.multinomial(m, probs[todo])[:, :4]
        hit = _wedge(c)
        out[todo[hit]] = _triangle(c[hit])
        todo = todo[~hit]
    raise RuntimeError("wedge too rare for rejection sampling")


def _triangles_given_wedge(rng, p, m):
    q = _categories(p)
    impossible = (q[:, 0] == 0) & ((q[:, 2] == 0) | (q[:, 3] == 0))
    if impossible.any():
        raise UndefinedStatistic("the wedge has probability zero for some weight triple")
    u = rng.random(p.shape[0])
    out = np.zeros(p.shape[0], dtype=bool)
    todo = np.arange(p.shape[0])
    for k_max in _K_LEVELS:
        if todo.size == 0:
            break
        # keep the enumeration table near 2e7 cells
        step = max(1, 20_000_000 // _COMBOS[k_max].shape[0])
        still = []
        for s in range(0, todo.size, step):
            rows = todo[s:s + step]
            tri, ok = _enumerate_rows(q[rows], m, k_max, u[rows])
            out[rows[ok]] = tri[ok]
            still.append(rows[~ok])
        todo = np.concatenate(still)
    if todo.size:
        out[todo] = _rejection_rows(rng, q[todo], m)
    return out


def conditional_triple_mc(params: ModelParams, dist: WeightDistribution, replications: int,
                          seed: int, workers: int | None = None) -> ClusteringEstimate:
    """Monte Carlo estimate of E[P(ij edge | ik and jk edges)] for three labelled vertices.

    Every replication draws fresh weights for the three vertices, then the
    membership pattern of the three vertices conditional on the wedge ik, jk,
    and records whether the triangle closes.  The mean of these indicators
    estimates the weight-averaged conditional probability.
    """
    if replications < 1:
        raise ValueError("replications must be at least 1")
    m = params.m

    def block(rng, start, stop):
        w = dist.ppf(rng.random((stop - start, 3))) if not isinstance(dist, Degenerate) \
            else np.full((stop - start, 3), dist.value)
        p = membership_prob(params, w).reshape(-1, 3)
        return _triangles_given_wedge(rng, p, m)

    hits = np.concatenate(_rng.map_blocks(block, seed, _rng.TRIPLE_STATES, replications,
                                          block=1 << 14, workers=workers))
    est = float(hits.mean())
    se = math.sqrt(max(est * (1 - est), 0.0) / replications)
    return ClusteringEstimate(conditional_triple=est, std_error={"conditional_triple": se},
                              replications=replications)


def exact_conditional_triangle_mean(params: ModelParams, dist: WeightDistribution,
                                    samples: int, seed: int) -> tuple[float, float]:
    """Average of the exact finite-n conditional triangle probability over weights.

    Exact for degenerate weights; otherwise a Monte Carlo average over
    ``samples`` weight triples (returned with its standard error).
    """
    m = params.m
    if isinstance(dist, Degenerate):
        p = membership_prob(params, dist.value)
        return conditional_triangle_exact(p, p, p, m), 0.0
    rng = _rng.block_generator(seed, _rng.ORACLE, 0)
    p = membership_prob(params, dist.ppf(rng.random((samples, 3))))
    vals = np.array([conditional_triangle_exact(*row, m) for row in p])
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))


def tv_distance(pmf_a, pmf_b) -> float:
    """Total variation distance between two truncated pmfs.

    The mass missing from each vector is treated as one extra shared atom.
    """
    a = np.asarray(getattr(pmf_a, "pmf", pmf_a), dtype=float)
    b = np.asarray(getattr(pmf_b, "pmf", pmf_b), dtype=float)
    if a.shape != b.shape:
        raise ValueError("pmfs must have equal length")
    tail_a, tail_b = max(0.0, 1.0 - a.sum()), max(0.0, 1.0 - b.sum())
    return float(0.5 * np.abs(a - b).sum() + 0.5 * abs(tail_a - tail_b))


@dataclass(frozen=True)
class TailFit:
    slope: float
    hill_slope: float
    k_min: int
    n_tail: int


def tail_slope(h: DegreeHistogram, k_min: int, min_tail: int = 100,
               min_count: int = 10) -> TailFit:
    """Log-log slope of the complementary CDF over degrees ``>= k_min``.

    Points whose tail holds fewer than ``min_count`` vertices are dropped.  A
    discrete Hill estimate, ``-1 / mean(log(D / (k_min - 1/2)))``, is returned
    alongside; for a pure power-law tail ``P(D >= k) ~ k**-a`` both approach
    ``-a``.
    """
    counts = np.asarray(h.counts)
    ccount = np.cumsum(counts[::-1])[::-1]
    n_tail = int(ccount[k_min]) if k_min < counts.size else 0
    if n_tail < min_tail:
        raise InsufficientData(f"only {n_tail} vertices with degree >= {k_min}")
    k = np.arange(counts.size)
    sel = (k >= max(k_min, 1)) & (counts > 0) & (ccount >= min_count)
    if sel.sum() < 3:
        raise InsufficientData("fewer than three distinct tail degrees")
    x, y = np.log(k[sel]), np.log(ccount[sel] / h.n)
    slope = float(np.polyfit(x, y, 1)[0])
    tail_k = k[k >= k_min]
    tail_c = counts[k >= k_min]
    ref = max(k_min - 0.5, 0.5)
    hill = -float(tail_c.sum() / np.sum(tail_c * np.log(tail_k / ref)))
    return TailFit(slope, hill, int(k_min), n_tail)


# ---------------------------------------------------------------------------
# validation harness

DEFAULT_TOLERANCES = {
    "degree_tv": 0.02,
    "mean_degree_rel": 0.02,
    "mean_degree_sigma": 4.0,
    "isolated_sigma": 3.0,
    "transitivity_abs": 0.03,
    "triple_sigma": 3.0,
    "triple_vs_exact_abs": 0.01,
}

CHECKS = ("degree_tv", "mean_degree", "isolated_fraction", "transitivity",
          "conditional_triple_limit", "conditional_triple_exact")


@dataclass
class CheckResult:
    name: str
    value: float | None
    reference: float | None
    tolerance: float | None
    passed: bool | None
    detail: str = ""


@dataclass
class ValidationReport:
    params: dict
    distribution: dict
    seed: int
    replications: int
    checks: list = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=float)


def validate(params: ModelParams, dist: WeightDistribution, replications: int, seed: int,
             checks=None, tolerances=None, workers=None) -> ValidationReport:
    """Compare one generated graph and a triple Monte Carlo run against theory.

    Checks that do not apply to the regime are skipped; comparisons with no
    theoretical guarantee (transitivity against the limit for non-degenerate
    weights) are reported with ``passed=None``.
    """
    if replications < 1:
        raise ValueError("replications must be at least 1")
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    wanted = set(CHECKS if checks is None else checks)
    unknown = wanted - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    regime = Regime.of(params.alpha)
    report = ValidationReport(
        params={"n": params.n, "alpha": params.alpha, "beta": params.beta,
                "gamma": params.gamma, "m": params.m},
        distribution=dist.to_config(), seed=seed, replications=replications)
    add = report.checks.append

    w, b, g = generate(params, dist, seed, workers=workers)
    degrees = g.degrees

    if "degree_tv" in wanted and regime is not Regime.SUBCRITICAL:
        hist = DegreeHistogram.from_degrees(degrees)
        theory = marginal_degree_pmf(params.alpha, params.beta, params.gamma, dist,
                                     hist.counts.size - 1)
        tv = tv_distance(hist.pmf, theory)
        add(CheckResult("degree_tv", tv, 0.0, tol["degree_tv"], tv <= tol["degree_tv"],
                        f"against the {regime.value} limit law"))

    if "mean_degree" in wanted:
        emp = float(degrees.mean())
        limit = expected_degree_limit(params.beta, params.gamma, dist.mean())
        idx = np.linspace(0, params.n - 1, min(params.n, 200)).astype(np.int64)
        p = membership_prob(params, w)
        exact = float(np.mean([edge_prob_exact(p[i], p, params.m).sum()
                               - edge_prob_exact(p[i], p[i], params.m) for i in idx]))
        # groups contribute independently to the degree sum given the weights;
        # the weights add their own sampling noise
        _, sizes = b.group_sizes()
        pairs = np.r_[sizes * (sizes - 1.0), np.zeros(params.m - sizes.size)]
        se = math.hypot(math.sqrt(pairs.size) * float(pairs.std()) / params.n,
                        params.beta * params.gamma ** 2 * float(w.std()) / math.sqrt(params.n))
        band = max(tol["mean_degree_rel"] * limit, tol["mean_degree_sigma"] * se)
        add(CheckResult("mean_degree", emp, limit, band, abs(emp - limit) <= band,
                        f"std error {se:.3g}; exact finite-n expectation on sampled "
                        f"vertices {exact:.6g}"))

    if "isolated_fraction" in wanted and regime is Regime.SUBCRITICAL:
        frac = float(np.mean(degrees == 0))
        expect = float(np.mean([isolated_prob_exact(params, x) for x in np.unique(w)])) \
            if isinstance(dist, Degenerate) else \
            float(np.mean(np.exp(params.m * np.log1p(-np.minimum(membership_prob(params, w), 1 - 1e-16)))))
        sigma = math.sqrt(expect * (1 - expect) / params.n)
        add(CheckResult("isolated_fraction", frac, expect, tol["isolated_sigma"] * sigma,
                        abs(frac - expect) <= tol["isolated_sigma"] * sigma,
                        "fraction of degree-0 vertices against P(no group)"))

    limit_c = clustering_limit(dist, params.beta * params.gamma).value \
        if regime is Regime.CRITICAL else (1.0 if regime is Regime.SUBCRITICAL else 0.0)

    if "transitivity" in wanted:
        try:
            t, se = transitivity_with_error(g)
        except UndefinedStatistic:
            add(CheckResult("transitivity", None, limit_c, None, None, "undefined"))
        else:
            graded = regime is Regime.CRITICAL and isinstance(dist, Degenerate)
            ok = abs(t - limit_c) <= tol["transitivity_abs"] if graded else None
            add(CheckResult("transitivity", t, limit_c, tol["transitivity_abs"], ok,
                            f"gap to limit {t - limit_c:+.4g}, std error {se:.3g}"))

    if wanted & {"conditional_triple_limit", "conditional_triple_exact"}:
        est = conditional_triple_mc(params, dist, replications, seed, workers=workers)
        c_mc, se = est.conditional_triple, est.std_error["conditional_triple"]
        if "conditional_triple_limit" in wanted:
            band = tol["triple_sigma"] * se
            graded = regime is Regime.CRITICAL
            add(CheckResult("conditional_triple_limit", c_mc, limit_c, band,
                            abs(c_mc - limit_c) <= band if graded else None,
                            f"std error {se:.3g}"))
        if "conditional_triple_exact" in wanted:
            exact, exact_se = exact_conditional_triangle_mean(params, dist, 2000, seed)
            add(CheckResult("conditional_triple_exact", c_mc, exact, tol["triple_vs_exact_abs"],
                            abs(c_mc - exact) <= tol["triple_vs_exact_abs"],
                            f"exact-oracle std error {exact_se:.3g}"))
    return report
