"""Two-parameter log-logistic distribution.

The law LL(alpha, beta) on (0, inf) has cdf F(t) = t^beta / (alpha^beta + t^beta)
with scale alpha > 0 and shape beta > 0.  Every evaluation is routed through
log space, u = beta * (log t - log alpha), so that cdf, pdf, hazard and
likelihood stay finite for shape values far beyond those that overflow the
naive power form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, log_expit

__all__ = [
    "LLParams",
    "Sample",
    "cdf",
    "pdf",
    "hazard",
    "quantile",
    "draw_sample",
    "log_likelihood",
    "score",
]


@dataclass(frozen=True)
class LLParams:
    """Scale/shape parameter pair of a log-logistic law."""

    alpha: float
    beta: float

    def __post_init__(self):
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not np.isfinite(alpha) or alpha <= 0.0:
            raise ValueError(f"alpha must be finite and > 0, got {self.alpha!r}")
        if not np.isfinite(beta) or beta <= 0.0:
            raise ValueError(f"beta must be finite and > 0, got {self.beta!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


class Sample:
    """Immutable batch of strictly positive observations.

    Caches the natural logs of the observations, which every estimator in
    this package works from.
    """

    __slots__ = ("values", "log_values")

    def __init__(self, values):
        arr = np.atleast_1d(np.asarray(values, dtype=float)).copy()
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("a sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise ValueError("observations must be finite")
        if np.any(arr <= 0.0):
            raise ValueError("observations must be strictly positive")
        arr.flags.writeable = False
        log_arr = np.log(arr)
        log_arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "log_values", log_arr)

    def __setattr__(self, name, value):
        raise AttributeError("Sample is immutable")

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"Sample(n={self.n})"


def _log_ratio(t, p: LLParams):
    """Return u = beta * (log t - log alpha), validating t > 0."""
    arr = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("t must be finite and > 0")
    return p.beta * (np.log(arr) - np.log(p.alpha)), arr


def _maybe_scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def cdf(t, p: LLParams):
    """F(t) = t^beta / (alpha^beta + t^beta), evaluated as expit(u)."""
    u, _ = _log_ratio(t, p)
    return _maybe_scalar(expit(u))


def pdf(t, p: LLParams):
    """f(t) = beta alpha^beta t^(beta-1) / (t^beta + alpha^beta)^2."""
    u, arr = _log_ratio(t, p)
    return _maybe_scalar(p.beta / arr * expit(u) * expit(-u))


def hazard(t, p: LLParams):
    """h(t) = (beta/alpha) (t/alpha)^(beta-1) / (1 + (t/alpha)^beta)."""
    u, arr = _log_ratio(t, p)
    return _maybe_scalar(p.beta / arr * expit(u))


def quantile(u, p: LLParams):
    """Inverse cdf: alpha * (u / (1 - u))^(1/beta) for u in (0, 1)."""
    arr = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("u must lie strictly inside (0, 1)")
    logit = np.log(arr) - np.log1p(-arr)
    return _maybe_scalar(np.exp(np.log(p.alpha) + logit / p.beta))


def draw_sample(p: LLParams, n: int, rng: np.random.Generator) -> Sample:
    """Draw n observations by inverse transform of uniforms from ``rng``.

    Deterministic given the generator state; a uniform draw of exactly 0.0
    (probability 2^-53 per draw) is redrawn so observations stay positive.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    u = rng.random(n)
    while np.any(u == 0.0):
        zeros = u == 0.0
        u[zeros] = rng.random(int(zeros.sum()))
    return Sample(quantile(u, p))


def log_likelihood(s: Sample, p: LLParams) -> float:
    """Sum of log pdf over the sample.

    Equals n log(beta) - n beta log(alpha) + (beta - 1) sum(log t)
    - 2 sum(log(1 + (t/alpha)^beta)), computed in log space.
    """
    u = p.beta * (s.log_values - np.log(p.alpha))
    terms = np.log(p.beta) - s.log_values + log_expit(u) + log_expit(-u)
    return float(np.sum(terms))


def score(s: Sample, p: LLParams) -> np.ndarray:
    """Left-hand sides of the two likelihood score equations.

    With r_i = (t_i/alpha)^beta the components are
    ``2 sum r/(1+r) - n`` and
    ``2 beta sum r log(t/alpha)/(1+r) - beta sum log(t/alpha) - n``;
    both vanish at the maximum likelihood estimate.
    """
    d = s.log_values - np.log(p.alpha)
    sig = expit(p.beta * d)
    n = s.n
    s1 = 2.0 * np.sum(sig) - n
    s2 = 2.0 * p.beta * np.sum(sig * d) - p.beta * np.sum(d) - n
    return np.array([s1, s2])
