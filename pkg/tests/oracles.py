"""Brute-force test oracles, independent of the library code paths they check."""
from __future__ import annotations

import itertools

import numpy as np

I, J, K = 0, 1, 2
PAIR_IJ, PAIR_IK, PAIR_JK = {I, J}, {I, K}, {J, K}
# the eight ways a single group can intersect {i, j, k}
SUBSETS = [frozenset(s) for r in range(4) for s in itertools.combinations((I, J, K), r)]


def category_probs(p_i, p_j, p_k):
    p = (p_i, p_j, p_k)
    out = []
    for s in SUBSETS:
        prob = 1.0
        for v in range(3):
            prob *= p[v] if v in s else 1.0 - p[v]
        out.append(prob)
    return np.array(out)


def events_of(groups):
    """Evaluate the six triple events literally on an explicit list of groups."""
    idx = range(len(groups))

    def covers(g, pair):
        return pair <= groups[g]

    all_three = any(len(g) == 3 for g in groups)
    three = any(covers(a, PAIR_IJ) and covers(b, PAIR_IK) and covers(c, PAIR_JK)
                for a, b, c in itertools.permutations(idx, 3))
    two = any(covers(a, PAIR_IK) and covers(b, PAIR_JK)
              for a, b in itertools.permutations(idx, 2))
    e_ij = any(covers(g, PAIR_IJ) for g in idx)
    e_ik = any(covers(g, PAIR_IK) for g in idx)
    e_jk = any(covers(g, PAIR_JK) for g in idx)
    return np.array([all_three, three, two, all_three and two,
                     e_ij and e_ik and e_jk, e_ik and e_jk], dtype=float)


FIELDS = ("p_all_three_share", "p_three_distinct", "p_two_distinct",
          "p_overlap", "p_all_edges", "p_wedge")


def brute_force_triple(p_i, p_j, p_k, m, reps, seed, chunk=1_000_000):
    """Monte Carlo frequencies of the triple events.

    Each replication assigns every one of the ``m`` groups one of the eight
    categories; the groups are exchangeable, so the multinomial category
    counts are drawn and the explicit group list is rebuilt from them.
    Returns ``(estimates, std_errors)`` keyed by TripleProbs field names.
    """
    rng = np.random.default_rng(seed)
    probs = category_probs(p_i, p_j, p_k)
    pair_cats = [c for c, s in enumerate(SUBSETS) if len(s) >= 2]
    hits = np.zeros(6)
    done = 0
    cache = {}
    while done < reps:
        size = min(chunk, reps - done)
        counts = rng.multinomial(m, probs, size=size)[:, pair_cats]
        code = counts @ (np.int64(m + 1) ** np.arange(len(pair_cats)))
        uniq, inv_counts = np.unique(code, return_counts=True)
        for u, cnt in zip(uniq.tolist(), inv_counts.tolist()):
            if u not in cache:
                digits, groups = u, []
                for c in pair_cats:
                    digits, r = divmod(digits, m + 1)
                    groups.extend([SUBSETS[c]] * r)
                cache[u] = events_of(groups)
            hits += cnt * cache[u]
        done += size
    est = hits / reps
    se = np.sqrt(np.maximum(est * (1 - est), 1.0 / reps) / reps)
    return dict(zip(FIELDS, est)), dict(zip(FIELDS, se))
