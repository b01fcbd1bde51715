"""
Clustering: three labelled vertices against a whole graph
=========================================================

For ``alpha = 1`` the probability that two neighbours of a vertex are
themselves linked tends to ``E[1 / (1 + beta gamma W)]``.  We compute it
exactly at finite ``n``, estimate it by wedge-conditioned simulation, and
compare with the transitivity of one large graph.
"""

from wrig import Degenerate, ModelParams, Pareto, clustering_limit, conditional_triple_mc, generate
from wrig.exact import conditional_triangle_exact
from wrig.graphgen import membership_prob
from wrig.stats import transitivity_with_error

params = ModelParams(n=10_000, alpha=1.0, beta=1.0, gamma=1.0)
p = membership_prob(params, 1.0)
print("limit      ", clustering_limit(Degenerate(), 1.0).value)
print("exact n=1e4", conditional_triangle_exact(p, p, p, params.m))
est = conditional_triple_mc(params, Degenerate(), 100_000, seed=3)
print("simulated  ", est.conditional_triple, "+-", est.std_error["conditional_triple"])

###############################################################################
# With unit weights the transitivity of a single graph agrees with the limit.
# With Pareto weights it does not: hubs own most paths of length two and
# their neighbourhoods are barely clustered, so the graph-wide ratio falls
# well below the per-triple limit.

for dist in (Degenerate(), Pareto(4.0), Pareto(2.5)):
    _, _, g = generate(ModelParams(n=100_000), dist, seed=4)
    t, se = transitivity_with_error(g)
    print(dist, "limit", round(clustering_limit(dist, 1.0).value, 4), "transitivity", round(t, 4))
