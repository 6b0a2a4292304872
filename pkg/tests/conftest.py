import numpy as np
import pytest

from minorant.core import MaxAffineFn, PolyhedralSublinear


@pytest.fixture
def abs_fn():
    """f(x) = |x| on R as a max-affine function."""
    return MaxAffineFn(np.array([[1.0], [-1.0]]), np.array([0.0, 0.0]))


@pytest.fixture
def relu_fn():
    """f(x) = max(x, 0) on R."""
    return MaxAffineFn(np.array([[1.0], [0.0]]), np.array([0.0, 0.0]))


@pytest.fixture
def abs_sub():
    """S(x) = |x| on R as a polyhedral sublinear functional."""
    return PolyhedralSublinear(np.array([[1.0], [-1.0]]))
