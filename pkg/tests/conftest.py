import numpy as np
import pytest

from tspvqa import core


@pytest.fixture
def square():
    """Unit test workhorse: 10x10 square, corners in index order."""
    return core.make_instance([(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)])


@pytest.fixture
def inst5():
    return core.generate_instance(5, seed=11)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
