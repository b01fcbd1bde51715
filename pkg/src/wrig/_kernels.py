"""Compiled inner loops."""
import math

import numba
import numpy as np


@numba.njit(cache=True)
def poisson_smooth(weights, gamma, k_max):
    """``out[k] = sum_n weights[n] * Poisson(k; gamma * n)`` for ``k <= k_max``.

    Each Poisson kernel is walked outward from its mode by the ratio
    recurrence and cut once terms fall below 1e-22 of the mode value.
    """
    out = np.zeros(k_max + 1)
    for n in range(weights.size):
        w = weights[n]
        if w == 0.0:
            continue
        if n == 0:
            out[0] += w
            continue
        mu = gamma * n
        k0 = int(mu)
        if k0 > k_max:
            k0 = k_max
        p0 = math.exp(k0 * math.log(mu) - mu - math.lgamma(k0 + 1.0))
        if p0 == 0.0:
            continue
        cut = p0 * 1e-22
        p = p0
        k = k0
        while k <= k_max:
            out[k] += w * p
            k += 1
            p *= mu / k
            if p < cut and k > mu:
                break
        p = p0
        k = k0
        while k > 0:
            p *= k / mu
            k -= 1
            out[k] += w * p
            if p < cut and k < mu:
                break
    return out


@numba.njit(cache=True)
def compound_poisson_recursion(p0, primary, q, k_max):
    """Panjer recursion ``P(k) = primary/k * sum_j j q_j P(k-j)``."""
    out = np.zeros(k_max + 1)
    out[0] = p0
    jmax = q.size - 1
    for k in range(1, k_max + 1):
        acc = 0.0
        top = k if k < jmax else jmax
        for j in range(1, top + 1):
            acc += j * q[j] * out[k - j]
        out[k] = primary / k * acc
    return out
