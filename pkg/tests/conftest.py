"""Shared fixtures: seeded random measures for the property suites."""

import numpy as np
import pytest

from circletransport import (
    build_empirical,
    cdf_of_empirical,
    cdf_wrapped_exponential,
)

SEED = 20260324


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_step_cdf(rng, base=10, max_atoms=12):
    n = int(rng.integers(1, max_atoms + 1))
    return cdf_of_empirical(build_empirical(rng.random(n), base))


def random_wrapped_cdf(rng, base=10):
    return cdf_wrapped_exponential(base, float(rng.random()))


def random_cdf(rng, base=10):
    """Step CDF or wrapped exponential, equally likely."""
    if rng.random() < 0.5:
        return random_step_cdf(rng, base)
    return random_wrapped_cdf(rng, base)
