"""Kolmogorov-Smirnov goodness of fit against a log-logistic law.

The one-sample statistic D is the sup distance between the empirical cdf and
the fitted cdf.  For n <= 100 its null distribution is evaluated exactly with
the Marsaglia-Tsang-Wang matrix-power algorithm; beyond that the asymptotic
Kolmogorov series is used.  No adjustment is made for parameters having been
estimated from the same data, so p-values are those of the plain one-sample
null.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import LLParams, Sample, cdf, quantile
from .estimators import plotting_positions

__all__ = ["GofReport", "ks_statistic", "ks_p_value", "qq_points"]

# Largest n for which the exact null distribution is evaluated.
EXACT_LIMIT = 100


@dataclass(frozen=True)
class GofReport:
    """KS test outcome for one fitted method."""

    method: str
    n: int
    d_statistic: float
    p_value: float


def ks_statistic(s: Sample, p: LLParams) -> float:
    """Sup distance between the empirical cdf and the fitted cdf:
    max_i of max(i/n - F(t_(i)), F(t_(i)) - (i-1)/n)."""
    t = np.sort(s.values)
    n = s.n
    f = cdf(t, p)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def _ks_cdf_exact(n: int, d: float) -> float:
    """P(D_n < d) by the Marsaglia-Tsang-Wang matrix-power evaluation."""
    k = int(n * d) + 1
    m = 2 * k - 1
    h = k - n * d
    hm = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            if i - j + 1 >= 0:
                hm[i, j] = 1.0
    for i in range(m):
        hm[i, 0] -= h ** (i + 1)
        hm[m - 1, i] -= h ** (m - i)
    if 2.0 * h - 1.0 > 0.0:
        hm[m - 1, 0] += (2.0 * h - 1.0) ** m
    for i in range(m):
        for j in range(m):
            if i - j + 1 > 0:
                fact = 1.0
                for g in range(2, i - j + 2):
                    fact *= g
                hm[i, j] /= fact

    # hm**n by repeated squaring, rescaling by 1e140 to dodge overflow and
    # tracking the shed decimal exponent.
    def rescale(mat, exp10):
        centre = mat[m // 2, m // 2]
        if centre > 1e140:
            return mat * 1e-140, exp10 + 140
        return mat, exp10

    result, exp_r = np.eye(m), 0
    base, exp_b = hm, 0
    power = n
    while power:
        if power & 1:
            result, exp_r = rescale(result @ base, exp_r + exp_b)
        power >>= 1
        if power:
            base, exp_b = rescale(base @ base, 2 * exp_b)
    prob = result[k - 1, k - 1]
    for i in range(1, n + 1):
        prob = prob * i / n
        if prob < 1e-140:
            prob *= 1e140
            exp_r -= 140
    return float(prob * 10.0 ** exp_r)


def _ks_sf_asymptotic(n: int, d: float) -> float:
    """Limiting survival function 2 sum_k (-1)^(k-1) exp(-2 k^2 n d^2)."""
    x = n * d * d
    total = 0.0
    sign = 1.0
    for k in range(1, 101):
        term = np.exp(-2.0 * k * k * x)
        total += sign * term
        if term < 1e-16 * max(total, 1e-300):
            break
        sign = -sign
    return float(min(max(2.0 * total, 0.0), 1.0))


def ks_p_value(d: float, n: int) -> float:
    """Two-sided p-value of the one-sample KS statistic ``d`` at size ``n``.

    Exact null distribution for n <= EXACT_LIMIT, asymptotic series beyond.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"d must lie in [0, 1], got {d!r}")
    if d == 0.0:
        return 1.0
    if d == 1.0:
        return 0.0
    if n <= EXACT_LIMIT:
        return float(min(max(1.0 - _ks_cdf_exact(n, d), 0.0), 1.0))
    return _ks_sf_asymptotic(n, d)


def qq_points(s: Sample, p: LLParams) -> list[tuple[float, float]]:
    """Quantile-quantile pairs (fitted quantile at i/(n+1), i-th order
    statistic), in ascending order, ready for external plotting."""
    t = np.sort(s.values)
    theo = quantile(plotting_positions(s.n), p)
    return list(zip(map(float, np.atleast_1d(theo)), map(float, t)))
