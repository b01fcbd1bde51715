"""Worked examples for weights, generation and the limit laws."""
import math

import numpy as np
import pytest
from scipy import stats

from wrig.graphgen import BipartiteGraph, ModelParams, generate, generate_bipartite, \
    membership_prob, project
from wrig.limits import (CompoundPoisson, PoissonLaw, clustering_limit, compound_poisson_pmf,
                         expected_degree_limit, limiting_degree_law, pareto_clustering_lerch,
                         pareto_clustering_quadrature)
from wrig.stats import tv_distance
from wrig.weights import Degenerate, Pareto, pareto_density, sample_weights


def test_pareto_density_values():
    assert pareto_density(3, 0.25) == 0.0
    assert pareto_density(3, 0.5) == pytest.approx(4.0)


def test_pareto_sample_tail_and_ks():
    w = sample_weights(Pareto(3), 1_000_000, seed=21)
    assert abs(w.mean() - 1) < 0.01
    assert abs(np.mean(w > 1) - 0.25) < 0.005
    d = Pareto(3)
    assert stats.kstest(w[:100_000], d.cdf).statistic < 0.01


def test_membership_examples():
    assert membership_prob(ModelParams(100, 1.0, 1.0, 2.0), 1.0) == pytest.approx(0.02)
    assert membership_prob(ModelParams(4, 1.0, 1.0, 10.0), 2.0) == 1.0
    assert membership_prob(ModelParams(100, 1.0, 1.0, 2.0), 1e-300) < 1e-300


def test_generation_extremes():
    # zero weights give zero membership probabilities: every group is empty
    b = generate_bipartite(ModelParams(50, 1.0, 1.0, 1.0), np.zeros(50), seed=1)
    assert b.incidence_count == 0
    # capped probabilities: every group holds every vertex
    b = generate_bipartite(ModelParams(6, 1.0, 1.0, 100.0), np.ones(6), seed=1)
    assert all(len(g) == 6 for g in b.memberships())
    assert project(b).edge_count == 15


def test_group_counts_over_replications():
    p = ModelParams(1000, 1.0, 1.0, 1.0)
    q = membership_prob(p, 1.0)
    means = [generate_bipartite(p, np.ones(p.n), seed=s).vertex_group_counts.mean()
             for s in range(100)]
    sd = math.sqrt(p.m * q * (1 - q) / (p.n * 100))
    assert abs(np.mean(means) - p.m * q) < 3 * sd


def test_projection_examples():
    g = project(BipartiteGraph.from_memberships(3, [[0, 1, 2]]))
    assert g.edges.tolist() == [[0, 1], [0, 2], [1, 2]]
    assert project(BipartiteGraph.from_memberships(3, [[0, 1], [0, 1]])).edges.tolist() == [[0, 1]]
    g = project(BipartiteGraph.from_memberships(3, [[0, 1], [1, 2]]))
    assert g.edges.tolist() == [[0, 1], [1, 2]] and not g.has_edge(0, 2)


def test_mean_degree_example():
    _, _, g = generate(ModelParams(100_000, 1.0, 1.0, 2.0), Degenerate(), seed=3)
    assert g.degrees.mean() == pytest.approx(4.0, rel=0.02)


def test_subcritical_isolation_grows():
    fr = []
    for n in (10_000, 100_000):
        _, _, g = generate(ModelParams(n, 0.5, 1.0, 2.0), Degenerate(), seed=4)
        fr.append(np.mean(g.degrees == 0))
    assert fr[0] > 0.5 and fr[1] > fr[0]


def test_degree_limit_examples():
    assert expected_degree_limit(1, 2, 1) == 4
    assert expected_degree_limit(1, 2, 0) == 0
    assert expected_degree_limit(1.0, 3.7, 1.0) == pytest.approx(3.7 ** 2)
    assert limiting_degree_law(1, 2, 3, 1) == CompoundPoisson(6, 3)
    assert limiting_degree_law(2, 1, 2, 1.5) == PoissonLaw(6)


def test_compound_poisson_examples():
    assert compound_poisson_pmf(0.0, 1.0, 5).pmf.tolist() == [1, 0, 0, 0, 0, 0]
    rng = np.random.default_rng(8)
    n = rng.poisson(2.0, 10_000_000)
    x = rng.poisson(1.5 * n)
    emp = np.bincount(x, minlength=21)[:21] / x.size
    assert tv_distance(emp, compound_poisson_pmf(2.0, 1.5, 20).pmf) < 0.001


def test_clustering_limit_extremes():
    for d in (Degenerate(), Pareto(2.5), Pareto(4)):
        assert clustering_limit(d, 1e-9).value > 1 - 1e-6
    assert clustering_limit(Pareto(4), 1e9).value < 1e-8
    assert clustering_limit(Pareto(3), 1e-9).value > 1 - 1e-6


def test_lerch_examples():
    # z = 1 at (3, 2): alternating sum equals ln 2 - 1/2
    assert pareto_clustering_lerch(3, 2.0) == pytest.approx(2 * math.log(2) - 1, abs=1e-14)
    for s in (50.0, 500.0, 5000.0):
        assert pareto_clustering_lerch(4, s) == pytest.approx(
            pareto_clustering_quadrature(4, s), abs=1e-10)
