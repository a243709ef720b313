"""Distribution-free location, scale and line estimators.

Medians, sample quantiles, MAD, Hodges-Lehmann and Shamos statistics, plus
least-squares and repeated-median straight-line fits.  These are the building
blocks the robust log-logistic estimators are assembled from.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError

__all__ = [
    "NORMAL_Q3",
    "LineFit",
    "median",
    "sample_quantile",
    "mad_scale",
    "hodges_lehmann",
    "shamos_scale",
    "shamos_correction",
    "least_squares_line",
    "repeated_median_line",
    "pooled_median_line",
]

# Third quartile of the standard normal, Phi^-1(3/4).  Dividing by this
# constant makes MAD (and, with an extra sqrt(2), Shamos) Fisher-consistent
# for the standard deviation under normality.
NORMAL_Q3 = 0.6744897501960817


@dataclass(frozen=True)
class LineFit:
    """Slope/intercept pair of a fitted straight line."""

    slope: float
    intercept: float


def _as_1d(xs, minlen=1, name="xs"):
    arr = np.asarray(xs, dtype=float)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size < minlen:
        raise ValueError(f"{name} needs at least {minlen} values, got {arr.size}")
    return arr


def median(xs) -> float:
    """Sample median: middle order statistic, or the mean of the two middle
    order statistics for even length."""
    arr = _as_1d(xs)
    return float(np.median(arr))


def sample_quantile(xs, p: float) -> float:
    """Linearly interpolated quantile at rank position h = 1 + (n - 1) p.

    This is the interpolation convention of ``numpy.quantile`` with the
    default "linear" method.
    """
    arr = _as_1d(xs)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p!r}")
    return float(np.quantile(arr, p))


def mad_scale(xs) -> float:
    """Median absolute deviation from the median, divided by NORMAL_Q3.

    Returns 0.0 when more than half the values coincide; callers decide
    whether that is degenerate.
    """
    arr = _as_1d(xs, minlen=2)
    return float(np.median(np.abs(arr - np.median(arr))) / NORMAL_Q3)


def hodges_lehmann(xs, include_self: bool = True) -> float:
    """Median of the pairwise averages (x_i + x_j) / 2.

    With ``include_self`` (the default) the pairs run over i <= j, so each
    observation is also averaged with itself; otherwise only strict pairs
    i < j enter.
    """
    arr = _as_1d(xs)
    if arr.size == 1:
        return float(arr[0])
    k = 0 if include_self else 1
    i, j = np.triu_indices(arr.size, k=k)
    return float(np.median((arr[i] + arr[j]) / 2.0))


def shamos_correction(n: int) -> float:
    """Finite-sample unbiasing factor for the Shamos estimator at the normal.

    Fitted curve 1 + 0.414253297/n + 0.442396799/n^2; tends to 1 as n grows.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    return 1.0 + 0.414253297 / n + 0.442396799 / (n * n)


def shamos_scale(xs, correction: bool = False) -> float:
    """Median absolute pairwise difference, scaled to be Fisher-consistent.

    Computes med_{i<j} |x_i - x_j| / (sqrt(2) * NORMAL_Q3).  When
    ``correction`` is set the result is additionally divided by the
    finite-sample factor ``shamos_correction(n)``.  The default is no
    correction, which is the convention the golden fit values in this
    package are calibrated against.
    """
    arr = _as_1d(xs, minlen=2)
    i, j = np.triu_indices(arr.size, k=1)
    est = float(np.median(np.abs(arr[i] - arr[j])) / (np.sqrt(2.0) * NORMAL_Q3))
    if correction:
        est /= shamos_correction(arr.size)
    return est


def least_squares_line(xs, ys) -> LineFit:
    """Ordinary least squares fit y = intercept + slope * x."""
    x = _as_1d(xs, minlen=2)
    y = _as_1d(ys, minlen=2, name="ys")
    if x.size != y.size:
        raise ValueError("xs and ys must have equal length")
    dx = x - x.mean()
    sxx = float(np.sum(dx * dx))
    if sxx == 0.0:
        raise DegenerateDataError("least squares slope undefined: all x equal")
    slope = float(np.sum(dx * (y - y.mean())) / sxx)
    return LineFit(slope=slope, intercept=float(y.mean() - slope * x.mean()))


def _slope_rows(x, y):
    """All pairwise slopes, row i holding (y_i - y_j)/(x_i - x_j) for j != i.

    Tied x values produce +-inf slopes (sign from the y difference), which
    the medians absorb as long as they do not dominate.  An exactly repeated
    (x, y) point leaves a 0/0 slope with no usable limit, so it is rejected.
    """
    n = x.size
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (y[:, None] - y[None, :]) / (x[:, None] - x[None, :])
    off_diag = ~np.eye(n, dtype=bool)
    rows = s[off_diag].reshape(n, n - 1)
    if np.isnan(rows).any():
        raise DegenerateDataError(
            "pairwise slope undefined: duplicated (x, y) point")
    return rows


def _check_line(slope, intercept, what):
    if not np.isfinite(slope) or not np.isfinite(intercept):
        raise DegenerateDataError(
            f"{what} undefined: too many tied or duplicated points")
    return LineFit(slope=float(slope), intercept=float(intercept))


def repeated_median_line(xs, ys) -> LineFit:
    """Repeated-median line: slope = med_i med_{j != i} pairwise slope,
    intercept = med_i (y_i - slope * x_i).

    Both median levels use the even-length averaging rule of ``median``.
    The slope has a 50% breakdown point.
    """
    x = _as_1d(xs, minlen=2)
    y = _as_1d(ys, minlen=2, name="ys")
    if x.size != y.size:
        raise ValueError("xs and ys must have equal length")
    rows = _slope_rows(x, y)
    with np.errstate(invalid="ignore"):  # medians may average +-inf
        slope = np.median(np.median(rows, axis=1))
        intercept = np.median(y - slope * x)
    return _check_line(slope, intercept, "repeated median fit")


def pooled_median_line(xs, ys) -> LineFit:
    """Running-pool variant of the repeated-median line.

    Point i contributes the median of the pooled slope lists of points
    1..i (in the order given), and the slope is the median of those n
    running medians.  Unlike ``repeated_median_line`` the result depends
    on the ordering of the points; fits built from sorted observations
    pass them in ascending x order.
    """
    x = _as_1d(xs, minlen=2)
    y = _as_1d(ys, minlen=2, name="ys")
    if x.size != y.size:
        raise ValueError("xs and ys must have equal length")
    rows = _slope_rows(x, y)
    flat = rows.reshape(-1)
    n, width = rows.shape
    with np.errstate(invalid="ignore"):  # medians may average +-inf
        running = [np.median(flat[: (i + 1) * width]) for i in range(n)]
        slope = np.median(running)
        intercept = np.median(y - slope * x)
    return _check_line(slope, intercept, "pooled median fit")
