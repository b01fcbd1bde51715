"""Exact finite-n probabilities for edges, degrees and vertex triples.

All values are conditional on the weights (equivalently on the membership
probabilities).  The triple events, for vertices i, j and centre k, are

    all_three_share   some group contains i, j and k
    three_distinct    three distinct groups cover ij, ik and jk respectively
    two_distinct      two distinct groups cover ik and jk respectively
    overlap           all_three_share and two_distinct
    all_edges         ij, ik and jk are all edges
    wedge             ik and jk are both edges
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy import special
from scipy.stats import binom

from .graphgen import ModelParams, membership_prob


@dataclass(frozen=True)
class TripleProbs:
    p_all_three_share: float
    p_three_distinct: float
    p_two_distinct: float
    p_overlap: float
    p_all_edges: float
    p_wedge: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def edge_prob_exact(p_i, p_j, m: int):
    """``1 - (1 - p_i p_j)**m``, accurate when ``p_i p_j`` is tiny."""
    q = np.asarray(p_i, dtype=float) * np.asarray(p_j, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(q >= 1.0, 1.0, -np.expm1(m * np.log1p(-np.minimum(q, 1.0))))
    return float(out) if out.ndim == 0 else out


def expected_degree_exact(params: ModelParams, weights, i: int) -> float:
    """Expected degree of vertex ``i`` given all weights."""
    p = np.atleast_1d(membership_prob(params, np.asarray(weights, dtype=float)))
    others = np.delete(p, i)
    return float(np.sum(edge_prob_exact(p[i], others, params.m)))


def isolated_prob_exact(params: ModelParams, w: float) -> float:
    """Probability that a vertex of weight ``w`` joins no group, ``(1-p)**m``."""
    p = membership_prob(params, w)
    if p >= 1.0:
        return 0.0
    return math.exp(params.m * math.log1p(-p))


# Capped group-count state: a = #groups holding i, j and k (capped at 3) and
# one flag per pair for "some group holds exactly that pair".  Index is
# a*8 + ij*4 + ik*2 + jk.
_IDX = np.arange(32)
_A = _IDX // 8
_BIJ = (_IDX >> 2) & 1
_BIK = (_IDX >> 1) & 1
_BJK = _IDX & 1
_ADD = np.stack([
    np.minimum(_A + 1, 3) * 8 + (_IDX % 8),     # group holds i, j, k
    _IDX | 4,                                   # exactly i, j
    _IDX | 2,                                   # exactly i, k
    _IDX | 1,                                   # exactly j, k
])


def _group_categories(p_i, p_j, p_k):
    qi, qj, qk = 1.0 - p_i, 1.0 - p_j, 1.0 - p_k
    return np.array([p_i * p_j * p_k, p_i * p_j * qk, p_i * qj * p_k, qi * p_j * p_k])


def _step(dist, pi):
    out = np.zeros(32)
    for t in range(4):
        if pi[t] > 0:
            out += np.bincount(_ADD[t], weights=pi[t] * dist, minlength=32)
    return out


def _merge(x, y):
    a = np.minimum(_A[:, None] + _A[None, :], 3)
    b = (_IDX[:, None] | _IDX[None, :]) % 8
    return np.bincount((a * 8 + b).ravel(), weights=np.outer(x, y).ravel(), minlength=32)


def _state_distribution(p_i, p_j, p_k, m):
    """Law of the capped state after ``m`` independent groups."""
    q = _group_categories(p_i, p_j, p_k)
    big_q = float(q.sum())
    out = np.zeros(32)
    if big_q <= 0.0:
        out[0] = 1.0
        return out
    pi = q / big_q
    mu = m * big_q
    k_max = int(min(m, math.ceil(mu + 40.0 * math.sqrt(mu) + 40)))
    if k_max <= 20000:
        # number of groups touching at least one pair is Binomial(m, Q); given
        # that count the group types are i.i.d. with law q / Q
        k = np.arange(k_max + 1)
        if big_q > 1e-200:
            weights = binom.pmf(k, m, big_q)
        else:
            # scipy's binomial pmf overflows for subnormal probabilities
            weights = np.exp(special.gammaln(m + 1.0) - special.gammaln(k + 1.0)
                             - special.gammaln(m - k + 1.0) + k * math.log(big_q)
                             + (m - k) * math.log1p(-big_q))
        dist = np.zeros(32)
        dist[0] = 1.0
        for k in range(k_max + 1):
            out += weights[k] * dist
            dist = _step(dist, pi)
        return out
    # dense regime: square-and-multiply over single-group laws
    single = np.zeros(32)
    single[0] = 1.0 - big_q
    single = single + _step(np.eye(32)[0], q)
    acc = np.eye(32)[0]
    e = m
    while e:
        if e & 1:
            acc = _merge(acc, single)
        e >>= 1
        if e:
            single = _merge(single, single)
    return acc


def triple_probs_exact(p_i: float, p_j: float, p_k: float, m: int) -> TripleProbs:
    """Exact probabilities of the triple events, k being the wedge centre."""
    for p in (p_i, p_j, p_k):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"membership probability {p} outside [0, 1]")
    if m < 1:
        raise ValueError("m must be at least 1")
    d = _state_distribution(float(p_i), float(p_j), float(p_k), int(m))
    all_three = _A >= 1
    # an all-three group can stand in for any pair lacking an exclusive group
    two = _A >= (1 - _BIK) + (1 - _BJK)
    three = _A >= (1 - _BIJ) + (1 - _BIK) + (1 - _BJK)
    all_edges = all_three | ((_BIJ & _BIK & _BJK) == 1)
    wedge = all_three | ((_BIK & _BJK) == 1)

    def pr(mask):
        return float(min(1.0, d[mask].sum()))

    p_abc = float(-np.expm1(m * np.log1p(-p_i * p_j * p_k))) if p_i * p_j * p_k < 1 else 1.0
    return TripleProbs(
        p_all_three_share=p_abc,
        p_three_distinct=pr(three),
        p_two_distinct=pr(two),
        p_overlap=pr(all_three & two),
        p_all_edges=pr(all_edges),
        p_wedge=pr(wedge),
    )


def triple_probs_asymptotic(beta, gamma, n, alpha, w_i, w_j, w_k) -> TripleProbs:
    """Leading-order triple probabilities for large ``n``.

    ``p_overlap`` carries only the order of magnitude
    ``(w_i w_j w_k)**2 / n**((5+alpha)/2)`` of the overlap event, without
    its unknown constant.
    """
    www = w_i * w_j * w_k
    a = beta * gamma ** 3 * www / n ** ((3.0 + alpha) / 2.0)
    b = beta ** 3 * gamma ** 6 * www ** 2 / n ** 3
    c = beta ** 2 * gamma ** 4 * w_i * w_j * w_k ** 2 / n ** 2
    d = www ** 2 / n ** ((5.0 + alpha) / 2.0)
    return TripleProbs(a, b, c, d, a + b, a + c)


def conditional_triangle_exact(p_i, p_j, p_k, m) -> float:
    """P(ij is an edge | ik and jk are edges) for fixed membership probabilities."""
    t = triple_probs_exact(p_i, p_j, p_k, m)
    if t.p_wedge <= 0.0:
        raise ZeroDivisionError("the wedge ik, jk has probability zero")
    return t.p_all_edges / t.p_wedge
