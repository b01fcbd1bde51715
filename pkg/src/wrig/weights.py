"""Vertex weight distributions.

Three families are supported: a point mass, the mean-one Pareto law with
density

    f(x) = (lam-2)**(lam-1) / (lam-1)**(lam-2) * x**(-lam),   x >= (lam-2)/(lam-1),

and an arbitrary finite table of values.  Pareto laws are only constructible
for ``lam > 2``; below that the mean is infinite.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import _rng


class NonUnitMeanWarning(UserWarning):
    """The weight law is valid but its mean is not 1."""


@dataclass(frozen=True)
class Degenerate:
    value: float = 1.0

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError(f"degenerate weight must be positive, got {self.value}")
        if abs(self.value - 1.0) > 1e-9:
            warnings.warn(f"degenerate weight {self.value} does not have mean 1",
                          NonUnitMeanWarning, stacklevel=3)

    def mean(self) -> float:
        return float(self.value)

    def ppf(self, q):
        return np.full(np.shape(q), float(self.value))

    def to_config(self) -> dict:
        return {"family": "degenerate", "value": self.value}


@dataclass(frozen=True)
class Pareto:
    lam: float

    def __post_init__(self):
        if not self.lam > 2:
            raise ValueError(f"Pareto exponent must exceed 2 (finite mean), got {self.lam}")

    @property
    def x_min(self) -> float:
        return (self.lam - 2.0) / (self.lam - 1.0)

    @property
    def norm(self) -> float:
        """Density prefactor (lam-2)**(lam-1) / (lam-1)**(lam-2)."""
        lam = self.lam
        return math.exp((lam - 1) * math.log(lam - 2) - (lam - 2) * math.log(lam - 1))

    def mean(self) -> float:
        # x_min * (lam-1)/(lam-2) == 1 analytically
        return self.x_min * (self.lam - 1.0) / (self.lam - 2.0)

    def pdf(self, x):
        return pareto_density(self.lam, x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        ok = x >= self.x_min
        out[ok] = -np.expm1((self.lam - 1.0) * np.log(self.x_min / x[ok]))
        return out

    def sf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        ok = x >= self.x_min
        out[ok] = (self.x_min / x[ok]) ** (self.lam - 1.0)
        return out

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        return self.x_min * np.exp(-np.log1p(-q) / (self.lam - 1.0))

    def to_config(self) -> dict:
        return {"family": "pareto", "lambda": self.lam}


@dataclass(frozen=True)
class EmpiricalTable:
    values: tuple
    probabilities: tuple
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if v.ndim != 1 or v.shape != p.shape or v.size == 0:
            raise ValueError("values and probabilities must be equal-length 1-d sequences")
        if np.any(v <= 0):
            raise ValueError("table values must be positive")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("table probabilities must be nonnegative and sum to 1")
        object.__setattr__(self, "values", tuple(v.tolist()))
        object.__setattr__(self, "probabilities", tuple(p.tolist()))
        object.__setattr__(self, "_cum", np.cumsum(p))
        mean = float(v @ p)
        if abs(mean - 1.0) > 1e-9:
            warnings.warn(f"empirical weight table has mean {mean:.12g}, not 1",
                          NonUnitMeanWarning, stacklevel=3)

    def mean(self) -> float:
        return float(np.dot(self.values, self.probabilities))

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        idx = np.searchsorted(self._cum, q, side="right")
        idx = np.minimum(idx, len(self.values) - 1)
        return np.asarray(self.values)[idx]

    def to_config(self) -> dict:
        return {"family": "table", "values": list(self.values),
                "probabilities": list(self.probabilities)}


WeightDistribution = Union[Degenerate, Pareto, EmpiricalTable]


def pareto_density(lam: float, x):
    """Mean-one Pareto density; zero below the support bound ``(lam-2)/(lam-1)``."""
    if not lam > 2:
        raise ValueError(f"Pareto exponent must exceed 2, got {lam}")
    x = np.asarray(x, dtype=float)
    x_min = (lam - 2.0) / (lam - 1.0)
    log_norm = (lam - 1) * math.log(lam - 2) - (lam - 2) * math.log(lam - 1)
    out = np.zeros_like(x)
    ok = x >= x_min
    out[ok] = np.exp(log_norm - lam * np.log(x[ok]))
    return out if out.ndim else float(out)


def sample_weights(dist: WeightDistribution, n: int, seed: int,
                   workers: int | None = None) -> np.ndarray:
    """Draw ``n`` i.i.d. weights from ``dist`` by inverse-CDF transform.

    Index ``i`` always receives the same uniform for a given seed, whatever the
    worker count.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(dist, Degenerate):
        return np.full(n, float(dist.value))
    u = _rng.uniforms(seed, _rng.WEIGHTS, n, workers=workers)
    return dist.ppf(u)


def from_config(cfg: dict) -> WeightDistribution:
    """Build a distribution from e.g. ``{"family": "pareto", "lambda": 2.5}``."""
    family = str(cfg.get("family", "")).lower()
    if family == "pareto":
        return Pareto(float(cfg["lambda"]))
    if family in ("degenerate", "constant", "point"):
        return Degenerate(float(cfg.get("value", 1.0)))
    if family in ("table", "empirical"):
        return EmpiricalTable(tuple(cfg["values"]), tuple(cfg["probabilities"]))
    raise ValueError(f"unknown weight family {cfg.get('family')!r}")


def quantile(dist: WeightDistribution, q: float) -> float:
    return float(dist.ppf(np.asarray(q)))
