"""Choose (beta, gamma) for a target clustering and mean degree at alpha = 1.

The limiting clustering depends on the parameters only through
``s = beta * gamma`` and decreases strictly from 1 to 0 in ``s``, so ``s``
is found by bisection.  The mean degree ``beta * gamma**2 = d`` then fixes
``gamma = d / s`` and ``beta = s**2 / d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graphgen import ModelParams
from .limits import clustering_limit
from .weights import WeightDistribution, quantile

TOLERANCE = 1e-10
MAX_STEPS = 200
# a membership scale this large needs an enormous n before probabilities drop below 1
_GAMMA_WARN = 1e3


@dataclass
class CalibrationResult:
    beta: float
    gamma: float
    betagamma: float
    achieved_clustering: float
    achieved_mean_degree: float
    iterations: int
    warnings: list = field(default_factory=list)

    def params(self, n: int) -> ModelParams:
        return ModelParams(n=n, alpha=1.0, beta=self.beta, gamma=self.gamma)


def _c(dist, s):
    return clustering_limit(dist, s).value


def solve_params(dist: WeightDistribution, c: float, d: float,
                 tol: float = TOLERANCE, max_steps: int = MAX_STEPS) -> CalibrationResult:
    """Solve ``clustering_limit(dist, s) = c`` and split ``s`` using ``d``.

    Raises ``ValueError`` for targets outside (0, 1) or d <= 0, and
    ``ArithmeticError`` if bisection has not met ``tol`` after ``max_steps``.
    """
    if not 0.0 < c < 1.0:
        raise ValueError(f"target clustering must lie in (0, 1), got {c}")
    if not (d > 0 and math.isfinite(d)):
        raise ValueError(f"target mean degree must be positive, got {d}")
    mean = dist.mean()
    if abs(mean - 1.0) > 1e-9:
        raise ValueError(f"weight distribution must have mean 1, got {mean}")

    steps = 0
    lo = hi = 1.0
    c_hi = _c(dist, hi)
    if abs(c_hi - c) <= tol:
        lo = hi = 1.0
    elif c_hi > c:
        while c_hi > c:
            lo, hi = hi, 2.0 * hi
            c_hi = _c(dist, hi)
            steps += 1
            if steps > 2000:
                raise ArithmeticError("no upper bracket found")
    else:
        c_lo = c_hi
        while c_lo <= c:
            hi, lo = lo, 0.5 * lo
            c_lo = _c(dist, lo)
            steps += 1
            if lo < 1e-300:
                raise ArithmeticError("no lower bracket found")

    s = 0.5 * (lo + hi)
    c_s = _c(dist, s)
    it = 0
    while abs(c_s - c) > tol:
        if it >= max_steps:
            raise ArithmeticError(
                f"bisection did not reach |c(s) - c| <= {tol} in {max_steps} steps "
                f"(s = {s!r}, residual {c_s - c:.3g})")
        if c_s > c:
            lo = s
        else:
            hi = s
        s = 0.5 * (lo + hi)
        c_s = _c(dist, s)
        it += 1

    gamma = d / s
    beta = s * s / d
    warnings = []
    if gamma * quantile(dist, 0.999) > _GAMMA_WARN:
        warnings.append(
            f"gamma = {gamma:.4g}: membership probabilities hit the cap of 1 unless n is "
            f"very large (check with feasibility_check)")
    return CalibrationResult(beta, gamma, s, c_s, beta * gamma * gamma, it + steps, warnings)


def feasibility_check(result: CalibrationResult, n: int,
                      dist: WeightDistribution | None = None) -> list[str]:
    """Heuristic warnings for using ``result`` at ``n`` vertices.

    Raises ``ValueError`` if the group count ``floor(beta * n)`` is zero.
    """
    m = math.floor(result.beta * n * (1.0 + 4 * 2.0 ** -52))
    if m < 1:
        raise ValueError(f"floor(beta * n) = 0 for beta={result.beta}, n={n}: no groups")
    out = []
    if m < 10:
        out.append(f"only m = {m} groups; the asymptotic calibration is unreliable")
    w_hi = 1.0 if dist is None else quantile(dist, 0.999)
    p_hi = result.gamma * w_hi / n
    if p_hi >= 1.0:
        out.append(
            f"membership probability for the 99.9th-percentile weight ({w_hi:.4g}) is "
            f"{result.gamma * w_hi / n:.3g} >= 1 at n = {n}; the cap distorts the model")
    return out
