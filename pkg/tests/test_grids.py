import numpy as np
import pytest

from qruler.errors import InvalidGrid
from qruler.grids import GeneratorGrid, GeneratorKind, grid_for_gaussian, integer_grid


def test_spacing_and_points():
    grid = GeneratorGrid(-8.0, 8.0, 257)
    assert grid.spacing == pytest.approx(16.0 / 256)
    assert grid.points[0] == -8.0
    assert grid.points[-1] == 8.0
    assert len(grid.points) == 257


def test_resolution_floor():
    with pytest.raises(InvalidGrid):
        GeneratorGrid(-1.0, 1.0, 32)


def test_bad_bounds():
    with pytest.raises(InvalidGrid):
        GeneratorGrid(1.0, -1.0, 128)
    with pytest.raises(InvalidGrid):
        GeneratorGrid(0.0, np.inf, 128)


def test_tau_grid_is_difference_set():
    grid = GeneratorGrid(-2.0, 2.0, 65)
    tau = grid.tau_grid
    assert len(tau) == 2 * 65 - 1
    assert tau[len(tau) // 2] == 0.0
    np.testing.assert_allclose(np.diff(tau), grid.spacing)


def test_mu_grid_duality():
    # sum_k exp(-i tau_j mu_k) must vanish for every j != 0: the choice
    # dmu = 2*pi/(M*dg) makes the discrete transform exactly unitary
    grid = GeneratorGrid(-3.0, 3.0, 64)
    tau, mu = grid.tau_grid, grid.mu_grid
    kernel = np.exp(-1j * np.outer(tau, mu)).sum(axis=1)
    expected = np.zeros(len(tau))
    expected[len(tau) // 2] = len(tau)
    np.testing.assert_allclose(kernel, expected, atol=1e-9)


def test_grid_for_gaussian_covers():
    grid = grid_for_gaussian(2.0, 0.5, 128)
    assert grid.covers(2.0 - 8 * 0.5, 2.0 + 8 * 0.5)
    assert not grid.covers(-10.0, 10.0)


def test_integer_grid():
    grid = integer_grid(100)
    assert grid.spacing == 1.0
    assert grid.kind is GeneratorKind.N
    assert grid.n_points == 101
