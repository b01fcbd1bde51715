import numpy as np
from hypothesis import given, settings, strategies as st

from wrig.exact import triple_probs_exact
from wrig.graphgen import ModelParams, generate
from wrig.limits import clustering_limit
from wrig.stats import tv_distance
from wrig.weights import Pareto, sample_weights

probs = st.floats(0.0, 1.0, allow_nan=False)


def _pmf(xs):
    a = np.asarray(xs, float) + 1e-3
    return a / a.sum()


vecs = st.lists(st.floats(0, 1), min_size=5, max_size=5).map(_pmf)


@given(vecs, vecs, vecs)
def test_tv_is_a_metric(a, b, c):
    assert 0 <= tv_distance(a, b) <= 1 + 1e-12
    assert tv_distance(a, a) == 0
    assert abs(tv_distance(a, b) - tv_distance(b, a)) < 1e-15
    assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12


@given(st.floats(2.01, 12.0), st.floats(1e-3, 1e3), st.floats(1.0001, 3.0))
@settings(max_examples=60, deadline=None)
def test_clustering_decreasing_and_bounded(lam, s, factor):
    a = clustering_limit(Pareto(lam), s).value
    b = clustering_limit(Pareto(lam), s * factor).value
    assert 0 < b < a < 1


@given(st.floats(2.01, 10.0))
@settings(max_examples=40, deadline=None)
def test_pareto_mean_one(lam):
    d = Pareto(lam)
    # E[W] = x_min (lam-1)/(lam-2) for this parametrisation
    assert abs(d.x_min * (lam - 1) / (lam - 2) - 1) < 1e-12
    assert d.cdf(d.x_min) == 0.0


@given(probs, probs, probs, st.integers(1, 40))
@settings(max_examples=80, deadline=None)
def test_triple_probabilities_consistent(pi, pj, pk, m):
    t = triple_probs_exact(pi, pj, pk, m)
    vals = t.as_dict()
    assert all(-1e-12 <= v <= 1 + 1e-12 for v in vals.values())
    assert t.p_overlap <= min(t.p_all_three_share, t.p_two_distinct) + 1e-12
    assert t.p_all_edges <= t.p_wedge + 1e-12
    assert abs(t.p_wedge - (t.p_all_three_share + t.p_two_distinct - t.p_overlap)) < 1e-10


@given(st.integers(0, 2 ** 32), st.integers(1, 4))
@settings(max_examples=10, deadline=None)
def test_generation_independent_of_workers(seed, workers):
    p = ModelParams(70_000, 1.0, 1.0, 1.0)
    _, _, a = generate(p, Pareto(2.5), seed)
    _, _, b = generate(p, Pareto(2.5), seed, workers=workers)
    assert np.array_equal(a.edges, b.edges)


@given(st.integers(0, 2 ** 32))
@settings(max_examples=10, deadline=None)
def test_weights_deterministic(seed):
    assert np.array_equal(sample_weights(Pareto(3), 1000, seed), sample_weights(Pareto(3), 1000, seed))
