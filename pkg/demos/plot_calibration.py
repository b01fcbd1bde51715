"""
Tuning the model to a target network
====================================

Pick a power-law exponent, a clustering level and a mean degree; the solver
returns ``beta`` and ``gamma``.  A graph drawn with these parameters has the
requested mean degree and a degree tail with exponent ``lam - 1``.
"""

from wrig import Pareto, degree_histogram, generate, tail_slope
from wrig.calibrate import feasibility_check, solve_params
from wrig.limits import clustering_limit

dist = Pareto(2.5)
result = solve_params(dist, c=0.5, d=5.0)
print(result)
print("check:", clustering_limit(dist, result.betagamma).value, result.beta * result.gamma ** 2)
print("warnings at n=1e6:", feasibility_check(result, 10**6, dist))

w, b, g = generate(result.params(10**6), dist, seed=5)
h = degree_histogram(g)
fit = tail_slope(h, k_min=20)
print(f"mean degree {h.mean():.3f}, ccdf slope {fit.slope:.3f}, Hill {fit.hill_slope:.3f}")

###############################################################################
# The sample mean of Pareto(2.5) weights converges slowly (infinite
# variance), and the mean degree given the weights is about
# ``d * mean(W)**2``, so single graphs can miss ``d`` by several percent.

print("mean weight", w.mean(), "predicted mean degree", 5.0 * w.mean() ** 2)
