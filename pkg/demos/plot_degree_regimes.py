"""
Degrees in the three regimes
============================

The number of groups is ``m = beta * n**alpha``.  Below ``alpha = 1`` almost
every vertex is isolated, at ``alpha = 1`` degrees follow a compound Poisson
law, and above it a plain Poisson law.  Each case is sampled and compared
with the limit.
"""

import numpy as np

from wrig import Degenerate, ModelParams, degree_histogram, generate, tv_distance
from wrig.limits import marginal_degree_pmf

# one graph per regime, same seed, unit weights
for alpha in (0.5, 1.0, 1.5):
    params = ModelParams(n=100_000, alpha=alpha, beta=1.0, gamma=1.5)
    w, b, g = generate(params, Degenerate(), seed=1)
    h = degree_histogram(g)
    limit = marginal_degree_pmf(alpha, 1.0, 1.5, Degenerate(), h.counts.size - 1)
    print(f"alpha={alpha}: m={params.m}, mean degree {h.mean():.3f}, "
          f"isolated {h.pmf[0]:.3f}, TV to limit {tv_distance(h.pmf, limit):.4f}")

###############################################################################
# At ``alpha = 0.5`` the limit is a point mass at zero; the isolated fraction
# creeps towards one only slowly, like ``(1 - p)**m``.

for n in (10**3, 10**4, 10**5, 10**6):
    params = ModelParams(n=n, alpha=0.5)
    _, _, g = generate(params, Degenerate(), seed=2)
    print(n, np.mean(g.degrees == 0))
