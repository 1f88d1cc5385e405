import numpy as np
import pytest
from scipy.integrate import quad

import activeflux as af
from activeflux.core import BoundaryMode, Grid1D, Grid2D, init_state, \
    init_state_2d, locate_cell, total_conserved

PER = BoundaryMode.PERIODIC
EXT = BoundaryMode.EXTRAPOLATE


def gauss(x):
    return 1.0 + 0.5 * np.exp(-80.0 * (np.asarray(x) - 0.5) ** 2)


class TestGrid:
    def test_spacing_and_interfaces(self):
        grid = Grid1D(0.0, 1.0, 10)
        assert grid.dx == pytest.approx(0.1)
        assert grid.n_interfaces(PER) == 10
        assert grid.n_interfaces(EXT) == 11
        np.testing.assert_allclose(grid.interfaces(EXT),
                                   np.linspace(0, 1, 11), atol=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            Grid1D(0.0, 1.0, 2)          # too few cells
        with pytest.raises(ValueError):
            Grid1D(1.0, 0.0, 10)
        with pytest.raises(ValueError):
            Grid1D(np.nan, 1.0, 10)
        with pytest.raises(ValueError):
            Grid2D(0.0, 0.0, 2, 5, 0.1, 0.1)


class TestLocateCell:
    def test_interior_point(self):
        grid = Grid1D(0.0, 1.0, 10)
        i, x = locate_cell(grid, 0.05, PER)
        assert i == 0 and x == 0.05

    def test_periodic_wrap(self):
        grid = Grid1D(0.0, 1.0, 10)
        i, x = locate_cell(grid, 1.05, PER)
        assert i == 0
        assert x == pytest.approx(0.05)

    def test_extrapolate_clamps(self):
        grid = Grid1D(0.0, 1.0, 10)
        i, x = locate_cell(grid, -0.3, EXT)
        assert i == 0 and x == 0.0
        i, x = locate_cell(grid, 1.7, EXT)
        assert i == 9 and x == 1.0

    def test_nonfinite_rejected(self):
        grid = Grid1D(0.0, 1.0, 10)
        with pytest.raises(ValueError):
            locate_cell(grid, np.nan, PER)

    def test_center_roundtrip_identity(self):
        grid = Grid1D(-0.7, 2.1, 37)
        idx, _ = locate_cell(grid, grid.centers(), PER)
        np.testing.assert_array_equal(idx, np.arange(37))
        idx, _ = locate_cell(grid, grid.centers(), EXT)
        np.testing.assert_array_equal(idx, np.arange(37))


class TestInitState:
    def test_constant(self):
        grid = Grid1D(0.0, 1.0, 8)
        state = init_state(grid, af.burgers(), lambda x: np.full_like(x, 3.25), PER)
        assert np.all(state.averages == 3.25)
        assert np.all(state.points == 3.25)

    def test_linear_simpson_exact(self):
        grid = Grid1D(0.0, 1.0, 4)
        state = init_state(grid, af.burgers(), lambda x: x, EXT)
        np.testing.assert_allclose(state.averages[:, 0],
                                   [0.125, 0.375, 0.625, 0.875], rtol=1e-15)
        np.testing.assert_allclose(state.points[:, 0],
                                   [0.0, 0.25, 0.5, 0.75, 1.0], rtol=1e-15)

    def test_quadratic_exact(self):
        # Simpson is exact through cubics, so averages match analytic means
        grid = Grid1D(0.0, 1.0, 5)
        state = init_state(grid, af.burgers(), lambda x: x * x, PER)
        edges = np.linspace(0, 1, 6)
        exact = (edges[1:] ** 3 - edges[:-1] ** 3) / (3 * grid.dx)
        np.testing.assert_allclose(state.averages[:, 0], exact, rtol=1e-14)

    def test_gaussian_vs_quadrature_oracle(self):
        # Fourth-order init error, checked against adaptive quadrature
        errs = {}
        for n in (20, 40):
            grid = Grid1D(0.0, 1.0, n)
            state = init_state(grid, af.burgers(), gauss, PER)
            edges = np.linspace(0, 1, n + 1)
            exact = np.array([quad(gauss, edges[i], edges[i + 1],
                                   epsabs=1e-14, epsrel=1e-13)[0] / grid.dx
                              for i in range(n)])
            errs[n] = np.max(np.abs(state.averages[:, 0] - exact))
        assert errs[20] / errs[40] > 11.0     # ~ 2^4
        assert errs[40] < 1e-5

    def test_nonfinite_ic_rejected(self):
        grid = Grid1D(0.0, 1.0, 4)
        with pytest.raises(ValueError):
            init_state(grid, af.burgers(), lambda x: 1.0 / (x - 0.5), EXT)


class TestInit2D:
    def test_constant(self):
        grid = Grid2D(0.0, 0.0, 4, 5, 0.25, 0.2)
        state = init_state_2d(grid, lambda x, y: np.broadcast_to(2.0, np.broadcast(x, y).shape).copy(), PER)
        for arr in (state.averages, state.corners, state.xmid, state.ymid):
            assert np.all(arr == 2.0)
        assert state.corners.shape == (4, 5)
        state = init_state_2d(grid, lambda x, y: x * 0 + y * 0 + 2.0, EXT)
        assert state.corners.shape == (5, 6)
        assert state.xmid.shape == (4, 6)
        assert state.ymid.shape == (5, 5)

    def test_biquadratic_means_exact(self):
        # tensor Simpson integrates x^2 y^2 exactly
        grid = Grid2D(0.0, 0.0, 3, 3, 1.0 / 3, 1.0 / 3)
        state = init_state_2d(grid, lambda x, y: x * x * y * y, PER)
        ex = np.linspace(0, 1, 4)
        mx = (ex[1:] ** 3 - ex[:-1] ** 3) / (3 * grid.dx)
        np.testing.assert_allclose(state.averages, np.outer(mx, mx), rtol=1e-13)


def test_total_conserved():
    grid = Grid1D(0.0, 2.0, 8)
    state = init_state(grid, af.burgers(), lambda x: np.full_like(x, 1.5), PER)
    np.testing.assert_allclose(total_conserved(state, grid), [3.0], rtol=1e-15)
