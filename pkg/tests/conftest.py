import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from torsor.algebra.finite_ring import finite_ring_build

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def Z6():
    return finite_ring_build("Z/6")


@pytest.fixture(scope="session")
def Z4():
    return finite_ring_build("Z/4")


def members(sub):
    """Elements of a finite submodule, as a set of coordinate tuples."""
    return sub.elements()


def vec(*xs):
    return np.array(xs, dtype=np.int64)
