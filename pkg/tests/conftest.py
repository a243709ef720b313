import numpy as np
import pytest

from llfit import LLParams, Sample, draw_sample, replication_rng
from llfit.datasets import INSULATING_FLUID


@pytest.fixture(scope="session")
def fluid():
    """The builtin insulating-fluid breakdown-time sample (n=19)."""
    return Sample(INSULATING_FLUID)


@pytest.fixture(scope="session")
def ll_sample():
    """Factory for reproducible log-logistic samples."""

    def make(seed, n, alpha=1.0, beta=5.0):
        return draw_sample(LLParams(alpha, beta), n, replication_rng(seed, 0))

    return make


@pytest.fixture()
def rng():
    return np.random.default_rng(20240809)
