"""Exception types shared across the fitting and simulation modules."""


class EstimationError(Exception):
    """Base class for estimator failures on otherwise valid samples."""


class DegenerateDataError(EstimationError, ValueError):
    """The sample carries no usable information for the requested estimator.

    Raised e.g. when both percentile anchors coincide (the shape estimate
    explodes), when a scale statistic is exactly zero, or when a regression
    fit has no finite, positive slope.
    """


class ConvergenceError(EstimationError):
    """Iterative solver did not reach the requested tolerance.

    Carries the best iterate found so callers can inspect or reuse it.
    """

    def __init__(self, message, alpha=None, beta=None, score_norm=None,
                 iterations=None):
        super().__init__(message)
        self.alpha = alpha
        self.beta = beta
        self.score_norm = score_norm
        self.iterations = iterations
