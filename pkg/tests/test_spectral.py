import math

import numpy as np
import pytest

from lvtlab import model, spectral
from lvtlab.spectral import Grid, SolverError


def test_grid_constructors():
    g = Grid.line(0.0, 1.0, n=99)
    np.testing.assert_allclose(g.h, 0.01)
    assert g.points[0] > 0 and g.points[-1] < 1
    r = Grid.radial(2.0, h=0.01)
    assert r.n == 200 and r.points[-1] == pytest.approx(2.0)
    p = Grid.plane(1.0, 99)
    np.testing.assert_allclose(p.h, 0.02)
    with pytest.raises(ValueError):
        Grid.line(0.0, 1.0, n=10)


def test_richardson_quadratic():
    assert spectral.richardson(1.0 + 4e-2, 1.0 + 1e-2) == pytest.approx(1.0)


def test_solve_1d_oscillator_levels():
    spec = model.iho(1.0, 1)
    sol = spectral.solve_1d(spec, Grid.line(-10, 10, h=0.01), 10)
    np.testing.assert_allclose(sol.energies, np.arange(10) + 0.5, atol=1e-8)
    norms = (sol.phi ** 2).sum(axis=1) * sol.grid.h
    np.testing.assert_allclose(norms, 1.0, atol=1e-12)


def test_solve_1d_box_levels_and_order2():
    spec = model.box(1.0)
    g = Grid.line(0.0, 1.0, n=999)
    sol = spectral.solve_1d(spec, g, 5)
    exact = spec.hb2m * (math.pi * np.arange(1, 6)) ** 2
    np.testing.assert_allclose(sol.energies, exact, rtol=1e-9)
    sol2 = spectral.solve_1d(spec, g, 5, order=2)
    assert np.max(np.abs(sol2.energies - exact) / exact) > 1e-7


def test_solve_1d_rejects():
    spec = model.iho(1.0, 1)
    with pytest.raises(SolverError):
        spectral.solve_1d(spec, Grid.radial(5.0, n=100), 4)
    with pytest.raises(SolverError):
        spectral.solve_1d(spec, Grid.line(-5, 5, n=100), 40)


def test_solve_1d_warns_at_edge():
    with pytest.warns(RuntimeWarning):
        spectral.solve_1d(model.iho(1.0, 1), Grid.line(-3, 3, h=0.01), 12)


@pytest.mark.parametrize("D", [2, 3])
def test_radial_oscillator_shells(D):
    spec = model.iho(1.0, D)
    g = Grid.radial(12.0, h=0.02)
    N = model.iho_shell_count(4, D)
    sol, occ = spectral.solve_radial_for_N(spec, N, g)
    assert occ.N == N
    np.testing.assert_allclose(occ.lambda_qm, model.lambda_M(4, D), atol=1e-8)
    levels = np.unique(np.round(sol.energies, 6))
    np.testing.assert_allclose(levels[:5], np.arange(5) + D / 2.0, atol=1e-8)


def test_radial_open_shell_raises():
    spec = model.radial_power(0.5, 4.0, 2)
    g = Grid.radial(6.0, h=0.02)
    with pytest.raises(SolverError):
        spectral.solve_radial_for_N(spec, 500, g)


def test_disk_billiard_levels():
    sol = spectral.solve_disk_billiard(1.0, count=10)
    np.testing.assert_allclose(sol.energies[0], 2.404825557695773 ** 2, rtol=1e-12)
    assert sol.degeneracy[0] == 1 and sol.degeneracy[1] == 2
    r, h = sol.grid.points, sol.grid.h
    np.testing.assert_allclose((sol.phi ** 2 * r).sum(axis=1) * h, 1.0, atol=1e-3)


def test_2d_grid_oscillator():
    spec = model.iho(1.0, 2)
    g = Grid.plane(6.0, 121)
    sol = spectral.solve_2d_grid(spec, g, 6)
    np.testing.assert_allclose(sol.energies, [1, 2, 2, 3, 3, 3], atol=5e-3)
    assert sol.flags["residual"] < 1e-8
