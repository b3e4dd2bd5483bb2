import pytest

from renyiquant import PiecewiseConstantDensity


@pytest.fixture
def two_mass():
    # masses (0.25, 0.75) on the halves of [0, 1]
    return PiecewiseConstantDensity([0.0, 0.5, 1.0], [0.5, 1.5])
