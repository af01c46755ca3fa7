import functools

import pytest

from qbm_teleport.channel import QbmParams, build_coefficient_grid


@functools.lru_cache(maxsize=None)
def cached_grid(x=0.1, s=1.0, theta=100.0, alpha=0.1, tau_max=3.0, n=2001):
    return build_coefficient_grid(QbmParams(x, s, theta, alpha), tau_max, n)


@pytest.fixture(scope="session")
def grid():
    """Paper-figure defaults: x=0.1, Ohmic, theta=100, alpha=0.1 on [0, 3]."""
    return cached_grid()


@pytest.fixture(scope="session")
def grid_for():
    return cached_grid
