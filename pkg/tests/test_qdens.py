import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lvtlab import closedform, model, qdens, spectral
from lvtlab.qdens import DensityError


@pytest.fixture(scope="module")
def osc1d():
    spec = model.iho(1.0, 1)
    g = spectral.Grid.line(-10, 10, h=0.01)
    sol = spectral.solve_1d(spec, g, 12)
    occ = model.fill_levels(sol.energies, sol.degeneracy, 10)
    return qdens.compute_densities(sol, occ)


def test_particle_number_and_kinetic(osc1d):
    fld = osc1d
    np.testing.assert_allclose(qdens.integrate_field(fld, fld.rho), 10.0, rtol=1e-10)
    # five filled levels: E_kin = E_tot / 2 = (0.5+1.5+...+4.5) * 2 / 2
    np.testing.assert_allclose(qdens.total_kinetic(fld), 12.5, rtol=1e-8)


def test_tau_tau1_relation(osc1d):
    fld = osc1d
    # tau1 - tau = (hbar^2/4m) lap rho
    d = fld.tau1 - fld.tau - 0.5 * fld.spec.hb2m * fld.lap_rho
    assert np.max(np.abs(d)) / np.max(np.abs(fld.tau)) < 1e-6


def test_grid_matches_analytic_oscillator(osc1d):
    ref = closedform.iho_densities(4, 1, grid=spectral.Grid.radial(10.0, h=0.01))
    i = np.searchsorted(osc1d.coord, 0.005)
    np.testing.assert_allclose(osc1d.rho[i:i + 500], ref.rho[:500], atol=1e-8)


def test_radial_integration_oscillator():
    fld = closedform.iho_densities(4, 3)
    np.testing.assert_allclose(qdens.integrate_field(fld, fld.rho), model.iho_shell_count(4, 3), rtol=1e-12)


def test_total_kinetic_raises_on_mismatch(osc1d):
    bad = qdens.DensityField(coord=osc1d.coord, h=osc1d.h, D=1, geometry="line", rho=osc1d.rho,
                             tau=osc1d.tau * 1.01, tau1=osc1d.tau1, xi=None, lap_rho=osc1d.lap_rho,
                             lambda_used=5.0, spec=osc1d.spec, N=10, extras=dict(osc1d.extras))
    with pytest.raises(DensityError, match="int tau"):
        qdens.total_kinetic(bad)


@settings(max_examples=25, deadline=None)
@given(k=st.floats(0.5, 3.0))
def test_radial_laplacian_gaussian(k):
    r = np.arange(1, 801) * 0.01
    f = np.exp(-k * r * r)
    for D in (2, 3):
        lap = qdens.laplacian(f, 0.01, D, "radial", r=r)
        exact = (4 * k * k * r * r - 2 * k * D) * f
        assert np.max(np.abs(lap - exact)) < 1e-6 * 2 * k * D


def test_plane_laplacian_quadratic():
    n, h = 41, 0.05
    x = (np.arange(n) - 20) * h
    X, Y = np.meshgrid(x, x)
    lap = qdens.laplacian(X ** 2 + Y ** 2, h, 2, "plane")
    np.testing.assert_allclose(lap[1:-1, 1:-1], 4.0, atol=1e-9)
    with pytest.raises(DensityError):
        qdens.laplacian(np.ones((3, 3)), h, 2, "plane")


def test_plane_densities_exact_identity():
    spec = model.iho(1.0, 2)
    g = spectral.Grid.plane(5.0, 81)
    sol = spectral.solve_2d_grid(spec, g, 10)
    occ = model.fill_levels(sol.energies, sol.degeneracy, 12, rel_tol=1e-2)
    fld = qdens.compute_densities(sol, occ)
    d = fld.tau1 - fld.tau - 0.5 * spec.hb2m * fld.lap_rho
    assert np.max(np.abs(d)) < 1e-9 * np.max(np.abs(fld.tau))
    np.testing.assert_allclose(qdens.integrate_field(fld, fld.rho), 12.0, rtol=1e-10)


def test_occupation_mismatch():
    spec = model.iho(1.0, 1)
    sol = spectral.solve_1d(spec, spectral.Grid.line(-8, 8, h=0.02), 8)
    occ = model.fill_levels(sol.energies[:4], sol.degeneracy[:4], 4)
    with pytest.raises(DensityError):
        qdens.compute_densities(sol, occ)
