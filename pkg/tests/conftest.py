import numpy as np
import pytest

from qruler.grids import grid_for_gaussian
from qruler.ruler import make_gaussian_ruler
from qruler.states import GaussianProbeSpec, make_gaussian_probe


@pytest.fixture
def unit_grid():
    """Grid covering a unit-width Gaussian at the origin."""
    return grid_for_gaussian(0.0, 1.0, 512)


@pytest.fixture
def unit_probe(unit_grid):
    return make_gaussian_probe(GaussianProbeSpec(center=0.0, sigma=1.0), unit_grid)


@pytest.fixture
def half_ruler(unit_grid):
    return make_gaussian_ruler(0.5, unit_grid)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
