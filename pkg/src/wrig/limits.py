"""Large-n laws: mean degree, limiting degree distributions and clustering.

The clustering limit for ``alpha == 1`` is ``E[1 / (1 + s W)]`` with
``s = beta * gamma``.  For the mean-one Pareto(lam) weight law it is computed
three ways, which must agree where they all apply:

* adaptive quadrature of the integral over ``u = x_min / x`` on [0, 1];
* the alternating series ``sum_k (-z)**k / (k + lam)``, valid for ``z <= 1``;
* a closed form with a logarithm and a finite sum, for integer ``lam``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, special

from . import _kernels
from .weights import Degenerate, EmpiricalTable, Pareto, WeightDistribution

PMF_TAIL_TOL = 1e-10
_EPS = np.finfo(float).eps


class Regime(enum.Enum):
    SUBCRITICAL = "alpha<1"
    CRITICAL = "alpha=1"
    SUPERCRITICAL = "alpha>1"

    @classmethod
    def of(cls, alpha: float) -> "Regime":
        # the trichotomy is structural: compare exactly
        if alpha < 1:
            return cls.SUBCRITICAL
        if alpha == 1:
            return cls.CRITICAL
        return cls.SUPERCRITICAL


@dataclass(frozen=True)
class TruncatedPmf:
    """Probabilities for ``k = 0..k_max``; ``tail`` is the missing mass."""

    pmf: np.ndarray
    tail: float
    error_bound: float = 0.0

    def __len__(self):
        return self.pmf.size

    def __getitem__(self, k):
        return self.pmf[k]

    @property
    def k_max(self) -> int:
        return self.pmf.size - 1

    def mean(self) -> float:
        return float(np.arange(self.pmf.size) @ self.pmf)


def _truncated(pmf, error_bound=0.0) -> TruncatedPmf:
    pmf = np.clip(np.asarray(pmf, dtype=float), 0.0, None)
    tail = max(0.0, 1.0 - math.fsum(pmf))
    return TruncatedPmf(pmf, tail, error_bound)


@dataclass(frozen=True)
class PointMassZero:
    regime = Regime.SUBCRITICAL

    def mean(self) -> float:
        return 0.0

    def pmf(self, k_max: int | None = None) -> TruncatedPmf:
        out = np.zeros((k_max or 0) + 1)
        out[0] = 1.0
        return TruncatedPmf(out, 0.0)

    def describe(self) -> str:
        return "point mass at 0"


@dataclass(frozen=True)
class CompoundPoisson:
    """Poisson(primary_rate)-many i.i.d. Poisson(secondary_rate) summands."""

    primary_rate: float
    secondary_rate: float
    regime = Regime.CRITICAL

    def mean(self) -> float:
        return self.primary_rate * self.secondary_rate

    def pmf(self, k_max: int | None = None) -> TruncatedPmf:
        return compound_poisson_pmf(self.primary_rate, self.secondary_rate, k_max)

    def describe(self) -> str:
        return (f"compound Poisson: Poisson({self.primary_rate:.12g}) many "
                f"Poisson({self.secondary_rate:.12g}) variables")


@dataclass(frozen=True)
class PoissonLaw:
    rate: float
    regime = Regime.SUPERCRITICAL

    def mean(self) -> float:
        return self.rate

    def pmf(self, k_max: int | None = None) -> TruncatedPmf:
        return poisson_pmf(self.rate, k_max)

    def describe(self) -> str:
        return f"Poisson({self.rate:.12g})"


DegreeLaw = PointMassZero | CompoundPoisson | PoissonLaw


def expected_degree_limit(beta: float, gamma: float, w) -> float:
    """Limiting mean degree ``beta * gamma**2 * w`` of a weight-``w`` vertex."""
    return beta * gamma ** 2 * w


def limiting_degree_law(alpha, beta, gamma, w) -> DegreeLaw:
    for name, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma), ("w", w)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    regime = Regime.of(alpha)
    if regime is Regime.SUBCRITICAL:
        return PointMassZero()
    if regime is Regime.CRITICAL:
        return CompoundPoisson(beta * gamma * w, gamma)
    return PoissonLaw(beta * gamma ** 2 * w)


def _auto_kmax(mean, scale):
    return int(math.ceil(mean + 12.0 * math.sqrt(scale + 1.0) + 30.0))


def poisson_pmf(rate: float, k_max: int | None = None) -> TruncatedPmf:
    if rate < 0:
        raise ValueError("rate must be nonnegative")
    if k_max is None:
        k_max = _auto_kmax(rate, rate)
    k = np.arange(k_max + 1)
    if rate == 0:
        return TruncatedPmf((k == 0).astype(float), 0.0)
    return _truncated(np.exp(k * math.log(rate) - rate - special.gammaln(k + 1)))


def compound_poisson_pmf(primary_rate: float, secondary_rate: float,
                         k_max: int | None = None,
                         tol: float = PMF_TAIL_TOL) -> TruncatedPmf:
    """Law of a Poisson(primary_rate) sum of Poisson(secondary_rate) variables.

    Computed by the compound Poisson recursion

        P(0) = exp(primary_rate * (q_0 - 1))
        P(k) = primary_rate / k * sum_{j=1..k} j q_j P(k - j)

    with ``q`` the Poisson(secondary_rate) pmf.  Without ``k_max`` the support is
    extended until the missing mass is below ``tol``.
    """
    if primary_rate < 0 or secondary_rate < 0:
        raise ValueError("rates must be nonnegative")
    if primary_rate == 0 or secondary_rate == 0:
        out = np.zeros((k_max or 0) + 1)
        out[0] = 1.0
        return TruncatedPmf(out, 0.0)
    log_p0 = primary_rate * math.expm1(-secondary_rate)
    if log_p0 < -700:
        raise ValueError("rates too large: P(0) underflows the recursion")
    p0 = math.exp(log_p0)
    mean = primary_rate * secondary_rate
    var = primary_rate * secondary_rate * (1 + secondary_rate)
    adaptive = k_max is None
    k = k_max if not adaptive else _auto_kmax(mean, var)
    while True:
        jmax = min(k, _auto_kmax(secondary_rate, secondary_rate))
        q = poisson_pmf(secondary_rate, jmax).pmf
        out = _truncated(_kernels.compound_poisson_recursion(p0, primary_rate, q, k))
        if not adaptive or out.tail < tol:
            return out
        k *= 2


def _pareto_mixed_poisson(lam: float, rate: float, n_max: int) -> np.ndarray:
    """``P(N = n)`` for N ~ Poisson(rate * W), W ~ mean-one Pareto(lam).

    ``P(N = n) = C rate**(lam-1) Gamma(n + 1 - lam, rate * x_min) / n!`` with
    ``C`` the density prefactor and ``Gamma`` the upper incomplete gamma
    function.
    """
    dist = Pareto(lam)
    x = rate * dist.x_min
    n = np.arange(n_max + 1, dtype=float)
    a = n + 1.0 - lam
    log_pref = math.log(dist.norm) + (lam - 1.0) * math.log(rate)
    out = np.zeros(n_max + 1)
    pos = a > 0
    with np.errstate(divide="ignore"):
        log_upper = special.gammaln(a[pos]) + np.log(special.gammaincc(a[pos], x))
    out[pos] = np.exp(log_pref + log_upper - special.gammaln(n[pos] + 1.0))
    for i in np.flatnonzero(~pos):
        upper = mpmath.gammainc(float(a[i]), a=x)
        out[i] = float(mpmath.exp(log_pref) * upper / mpmath.factorial(int(n[i])))
    return out


def _mixture_pmf(regime, beta, gamma, weights, probs, k_max):
    total = np.zeros(k_max + 1)
    for w, p in zip(weights, probs):
        law = limiting_degree_law(1.0 if regime is Regime.CRITICAL else 2.0, beta, gamma, w)
        total += p * law.pmf(k_max).pmf
    return _truncated(total)


def marginal_degree_pmf(alpha, beta, gamma, dist: WeightDistribution,
                        k_max: int) -> TruncatedPmf:
    """Limiting degree law of a typical vertex, mixed over the weight law."""
    regime = Regime.of(alpha)
    if regime is Regime.SUBCRITICAL:
        return PointMassZero().pmf(k_max)
    if isinstance(dist, Degenerate):
        return _mixture_pmf(regime, beta, gamma, [dist.value], [1.0], k_max)
    if isinstance(dist, EmpiricalTable):
        return _mixture_pmf(regime, beta, gamma, dist.values, dist.probabilities, k_max)
    if not isinstance(dist, Pareto):
        raise TypeError(f"unsupported weight distribution {dist!r}")
    if regime is Regime.SUPERCRITICAL:
        pmf = _pareto_mixed_poisson(dist.lam, beta * gamma ** 2, k_max)
        return _truncated(pmf, error_bound=1e-12)
    # degree = Poisson(gamma * N) with N the Pareto-mixed group count
    n_max = int(math.ceil((k_max + 12.0 * math.sqrt(k_max + 1.0) + 60.0) / gamma))
    groups = _pareto_mixed_poisson(dist.lam, beta * gamma, n_max)
    pmf = _kernels.poisson_smooth(groups, float(gamma), int(k_max))
    return _truncated(pmf, error_bound=1e-12)


# ----------------------------------------------------------------------------
# clustering


METHODS = ("degenerate-closed-form", "finite-sum", "quadrature", "lerch-series",
           "integer-lambda-closed-form")
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class ClusteringPrediction:
    value: float
    method: str
    error_bound: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error_bound", float(self.error_bound))


def _pareto_consts(lam, betagamma):
    if not lam > 2:
        raise ValueError(f"Pareto exponent must exceed 2, got {lam}")
    if not betagamma > 0:
        raise ValueError(f"betagamma must be positive, got {betagamma}")
    ratio = (lam - 1.0) / (lam - 2.0)
    return ratio, ratio / betagamma, (lam - 1.0) * ratio / betagamma


def _quadrature(lam, betagamma):
    _, z, pref = _pareto_consts(lam, betagamma)
    points = [1.0 / z] if z > 1.0 else None
    val, err = integrate.quad(lambda u: u ** (lam - 1.0) / (1.0 + z * u), 0.0, 1.0,
                              epsabs=1e-14, epsrel=1e-13, limit=500, points=points)
    return pref * val, pref * err + 4 * _EPS


def pareto_clustering_quadrature(lam: float, betagamma: float) -> float:
    """Clustering limit for Pareto(lam) weights by adaptive quadrature."""
    return _quadrature(lam, betagamma)[0]


def _alternating_sum(z, lam, n_terms=48):
    """``sum_k (-z)**k / (k + lam)`` for ``0 <= z <= 1``, with an error bound.

    Small ``z`` is summed directly.  Otherwise the terms ``z**k / (k + lam)``
    are moments of a positive measure on [0, 1] and the alternating sum is
    accelerated with the Cohen-Rodriguez Villegas-Zagier weights, whose error
    is at most ``2 a_0 / (3 + sqrt 8)**n``.
    """
    if z <= 0.5:
        total, term, k = 0.0, 1.0 / lam, 0
        terms = []
        while term > 1e-18 * (1.0 / lam):
            terms.append((-1) ** k * term)
            k += 1
            term = z ** k / (k + lam)
        return math.fsum(terms), term
    d = (3.0 + math.sqrt(8.0)) ** n_terms
    d = (d + 1.0 / d) / 2.0
    b, c, s = -1.0, -d, 0.0
    for k in range(n_terms):
        c = b - c
        s += c * z ** k / (k + lam)
        b = (k + n_terms) * (k - n_terms) * b / ((k + 0.5) * (k + 1.0))
    return s / d, 2.0 / lam / (3.0 + math.sqrt(8.0)) ** n_terms + 8 * _EPS


def _lerch(lam, betagamma):
    ratio, z, pref = _pareto_consts(lam, betagamma)
    if betagamma < ratio:
        raise ValueError(
            f"series needs betagamma >= (lam-1)/(lam-2) = {ratio:.12g}, got {betagamma}")
    s, err = _alternating_sum(min(z, 1.0), lam)
    return pref * s, pref * err


def pareto_clustering_lerch(lam: float, betagamma: float) -> float:
    """Clustering limit for Pareto(lam) weights via the Lerch series.

    Only defined for ``betagamma >= (lam-1)/(lam-2)``.
    """
    return _lerch(lam, betagamma)[0]


def _integer(lam, betagamma):
    if float(lam) != int(lam) or lam < 3:
        raise ValueError(f"closed form needs an integer exponent >= 3, got {lam}")
    L = int(lam)
    ratio, _, _ = _pareto_consts(L, betagamma)
    log_c = (L - 1) * math.log(L - 2) - (L - 2) * math.log(L - 1)
    terms = [(-betagamma) ** (L - 1) * math.log1p(ratio / betagamma)]
    terms += [(-betagamma) ** (L - 1 - l) / l * ratio ** l for l in range(1, L)]
    val = math.exp(log_c) * math.fsum(terms)
    err = math.exp(log_c) * 4 * _EPS * sum(abs(t) for t in terms) * L
    return val, err


def pareto_clustering_integer(lam: int, betagamma: float) -> float:
    """Clustering limit for integer Pareto exponents in closed form."""
    return _integer(lam, betagamma)[0]


def _pareto_clustering(lam, s):
    quad = _quadrature(lam, s)
    candidates = []
    if float(lam) == int(lam) and lam >= 3:
        val, err = _integer(lam, s)
        if err < 1e-11:
            candidates.append(("integer-lambda-closed-form", val, err))
    ratio = (lam - 1.0) / (lam - 2.0)
    if s >= ratio:
        val, err = _lerch(lam, s)
        candidates.append(("lerch-series", val, err))
    if not candidates:
        return ClusteringPrediction(quad[0], "quadrature", quad[1])
    method, val, err = candidates[0]
    gap = abs(val - quad[0])
    if gap > CROSS_CHECK_TOL:
        raise ArithmeticError(
            f"{method} ({val!r}) and quadrature ({quad[0]!r}) disagree by {gap:.3g} "
            f"at lam={lam}, betagamma={s}")
    return ClusteringPrediction(val, method, max(err, gap))


def clustering_limit(dist: WeightDistribution, betagamma: float) -> ClusteringPrediction:
    """Limiting clustering ``E[1 / (1 + betagamma W)]`` for ``alpha == 1``."""
    if not betagamma > 0:
        raise ValueError(f"betagamma must be positive, got {betagamma}")
    if isinstance(dist, Degenerate):
        return ClusteringPrediction(1.0 / (1.0 + betagamma * dist.value),
                                    "degenerate-closed-form", 0.0)
    if isinstance(dist, EmpiricalTable):
        v = np.asarray(dist.values)
        val = math.fsum(np.asarray(dist.probabilities) / (1.0 + betagamma * v))
        return ClusteringPrediction(val, "finite-sum", 4 * _EPS * len(v))
    if isinstance(dist, Pareto):
        return _pareto_clustering(dist.lam, betagamma)
    raise TypeError(f"unsupported weight distribution {dist!r}")


FIGURE_BETAGAMMAS = (1.0, 5.0, 10.0)
FIGURE_LAMBDAS = (2.1, 2.5, 4.0)


def default_lambda_grid() -> np.ndarray:
    return np.unique(np.round(np.r_[np.linspace(2.05, 8.0, 120), np.arange(3, 9)], 12))


def default_betagamma_grid() -> np.ndarray:
    return np.arange(1, 201) / 10.0


def figure1_curves(lambdas=None, betagammas=None) -> dict:
    """Clustering against the Pareto exponent and against ``betagamma``.

    Returns ``{"vs_lambda": rows, "vs_betagamma": rows}`` where each row is
    ``(curve parameter, x, c)``: for ``vs_lambda`` the curve parameter is
    betagamma in {1, 5, 10} and x is lambda; for ``vs_betagamma`` it is lambda
    in {2.1, 2.5, 4} and x is betagamma.
    """
    lambdas = default_lambda_grid() if lambdas is None else np.asarray(lambdas, float)
    betagammas = default_betagamma_grid() if betagammas is None else np.asarray(betagammas, float)
    if np.any(lambdas <= 2) or np.any(betagammas <= 0):
        raise ValueError("need lambda > 2 and betagamma > 0")
    vs_lambda = [(s, float(lam), clustering_limit(Pareto(float(lam)), s).value)
                 for s in FIGURE_BETAGAMMAS for lam in lambdas]
    vs_bg = [(lam, float(s), clustering_limit(Pareto(lam), float(s)).value)
             for lam in FIGURE_LAMBDAS for s in betagammas]
    return {"vs_lambda": vs_lambda, "vs_betagamma": vs_bg}
