"""Robust estimation toolkit for the two-parameter log-logistic distribution.

Provides exact distribution mathematics, six parameter estimators of very
different robustness (MLE, three percentile pairs, repeated-median
regression, sample-median/MAD and Hodges-Lehmann/Shamos), breakdown-point
diagnostics, a Kolmogorov-Smirnov goodness-of-fit test with exact small-n
p-values, and a deterministic contamination Monte Carlo engine, all behind
both a Python API and the ``llfit`` command line tool.
"""
from .distribution import (
    LLParams,
    Sample,
    cdf,
    draw_sample,
    hazard,
    log_likelihood,
    pdf,
    quantile,
    score,
)
from .errors import ConvergenceError, DegenerateDataError, EstimationError
from .estimators import (
    DEFAULT_METHODS,
    METHODS,
    PE1,
    PE2,
    PE3,
    BreakdownReport,
    EstimateResult,
    PercentilePair,
    fit_hl_shamos,
    fit_least_squares,
    fit_method,
    fit_mle,
    fit_percentile,
    fit_repeated_median,
    fit_sm_mad,
    percentile_breakdown,
    plotting_positions,
)
from .gof import GofReport, ks_p_value, ks_statistic, qq_points
from .robust import (
    NORMAL_Q3,
    LineFit,
    hodges_lehmann,
    least_squares_line,
    mad_scale,
    median,
    pooled_median_line,
    repeated_median_line,
    sample_quantile,
    shamos_correction,
    shamos_scale,
)
from .simulation import (
    CLEAN,
    ContaminationScenario,
    LLSource,
    PointMassSource,
    SimulationConfig,
    SimulationReport,
    UniformSource,
    bias_rmse,
    contaminate,
    replication_rng,
    reproduce_table,
    run_monte_carlo,
)

__version__ = "0.1.0"
