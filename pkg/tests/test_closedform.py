import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from lvtlab import closedform, model, qdens, spectral, virial
from lvtlab.closedform import BoxParams, LinearParams


# ------------------------------------------------------------------ IHO

@pytest.mark.parametrize("D", [1, 2, 3])
def test_iho_particle_number_and_energy(D):
    M = 6
    fld = closedform.iho_densities(M, D)
    N = model.iho_shell_count(M, D)
    np.testing.assert_allclose(qdens.integrate_field(fld, fld.rho), N, rtol=1e-12)
    # virial theorem for the oscillator: E_kin = E_tot / 2
    etot = sum(2 * math.comb(n + D - 1, D - 1) * (n + D / 2.0) for n in range(M + 1))
    np.testing.assert_allclose(qdens.total_kinetic(fld), etot / 2, rtol=1e-10)


def test_iho_matches_radial_solver():
    spec = model.iho(1.0, 3)
    g = spectral.Grid.radial(12.0, h=0.01)
    sol, occ = spectral.solve_radial_for_N(spec, model.iho_shell_count(5, 3), g)
    num = qdens.compute_densities(sol, occ)
    ref = closedform.iho_densities(5, 3, grid=g)
    for k in ("rho", "tau", "tau1"):
        a, b = getattr(num, k), getattr(ref, k)
        assert np.max(np.abs(a - b)) < 1e-7 * np.max(np.abs(b))


def test_iho_lap_extras_consistent():
    fld = closedform.iho_densities(4, 2, h=0.005)
    lap = qdens.laplacian(fld.rho, fld.h, 2, "radial", r=fld.coord)
    np.testing.assert_allclose(lap, fld.lap_rho, atol=1e-7 * np.abs(fld.lap_rho).max())


def test_iho_rejects():
    with pytest.raises(ValueError):
        closedform.iho_densities(2, 4)
    with pytest.raises(ValueError):
        closedform.iho_densities(-1, 3)


# --------------------------------------------------------------- linear

def test_linear_rho_vs_quadrature():
    p = LinearParams(1.0, 20.0)
    x = np.array([-3.0, 12.0, 19.0, 20.0, 22.5])
    np.testing.assert_allclose(closedform.linear_rho_1d(p, x), closedform.linear_rho_1d_quadrature(p, x),
                               rtol=1e-10)


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.3, 3.0), x=st.floats(-5.0, 5.0))
def test_linear_rho_derivative_is_airy_squared(a, x):
    # d rho / dx = -rho0 sigma a Ai(z)^2
    p = LinearParams(a, 2.0)
    h = 1e-4
    d = (closedform.linear_rho_1d(p, x + h) - closedform.linear_rho_1d(p, x - h)) / (2 * h)
    ai = special.airy(p.z(x))[0]
    np.testing.assert_allclose(d, -p.rho0 * p.sigma * a * ai ** 2, atol=1e-6 * p.rho0 * p.sigma * a)


def test_linear_far_interior_approaches_tf():
    p = LinearParams(1.0, 20.0)
    x = np.array([-200.0])
    tf = (2 / math.pi) * np.sqrt(2 * (p.lam - x))
    np.testing.assert_allclose(closedform.linear_rho_1d(p, x), tf, rtol=1e-3)


def test_linear_tau_fd():
    # tau = xi - (hbar^2/8m) rho'' with rho'' from finite differences
    p = LinearParams(1.0, 5.0)
    g = spectral.Grid.line(-5.0, 9.0, h=0.002)
    fld = closedform.linear_field_1d(p, g)
    lap = qdens.laplacian(fld.rho, g.h)
    np.testing.assert_allclose(lap[10:-10], fld.lap_rho[10:-10], atol=1e-6 * np.abs(fld.lap_rho).max())


def test_linear_asymptotics_raise_outside():
    p = LinearParams(1.0, 20.0)
    with pytest.raises(ValueError):
        closedform.linear_asymptotics_1d(p, np.array([20.5]))


def test_linear_asymptotic_improves_deep_inside():
    p = LinearParams(1.0, 20.0)
    x = np.linspace(-200.0, -100.0, 2001)
    drho = closedform.linear_rho_1d(p, x) - (2 / math.pi) * np.sqrt(2 * (p.lam - x))
    das = closedform.linear_asymptotics_1d(p, x)[0]
    assert np.max(np.abs(das - drho)) / np.max(np.abs(drho)) < 0.02


def test_bloch_identity_and_sign_flip():
    assert closedform.bloch_identity_check_1d(0.5, 1.0) < 1e-8
    assert closedform.bloch_identity_check_1d(0.5, 1.0, sign=-1) > 1e-3


@settings(max_examples=20, deadline=None)
@given(z=st.floats(-30.0, -1.0))
def test_airy_smooth_products_envelope(z):
    aa, pp, ap = closedform.airy_smooth_products(np.array([z]))
    # leading modulus forms M^2 ~ 1/(pi sqrt|z|), N^2 ~ sqrt|z|/pi
    np.testing.assert_allclose(aa, 0.5 / (math.pi * math.sqrt(-z)), rtol=0.1 / abs(z) ** 1.5 + 1e-3)
    np.testing.assert_allclose(pp, 0.5 * math.sqrt(-z) / math.pi, rtol=0.1 / abs(z) ** 1.5 + 1e-3)


def test_axis3_split_sums_to_exact():
    p = LinearParams(float(np.linalg.norm([1.0, 0.5, 0.7])), 20.0)
    x = np.linspace(-10, 15, 101)
    sp = closedform.linear_axis_3d_split(p, x)
    rho, xi, lt = closedform.linear_axis_3d(p, x)
    np.testing.assert_allclose(sp["rho"], rho, rtol=1e-13)
    np.testing.assert_allclose(sp["rho_smooth"] + sp["delta_rho"], rho, rtol=1e-13)
    np.testing.assert_allclose(sp["tau"], xi - lt, rtol=1e-12, atol=1e-14)


def test_axis3_asymptotic_delta_rho_matches_split():
    an = float(np.linalg.norm([1.0, 0.5, 0.7]))
    p = LinearParams(an, 60.0)
    x = np.linspace(0.0, (60.0 - 20.0) / an, 2001)
    sp = closedform.linear_axis_3d_split(p, x)
    das = closedform.linear_axis_3d_asymptotics(p, x)[0]
    assert np.max(np.abs(das - sp["delta_rho"])) / np.max(np.abs(sp["delta_rho"])) < 0.05


def test_axis3_xi_over_tau_scaling():
    # |delta xi| / |delta tau| ~ (lam - V)^(-3/2)
    p = LinearParams(1.0, 100.0)
    e = np.array([20.0, 80.0])
    x = p.lam - e
    _, dtau, dxi = closedform.linear_axis_3d_asymptotics(p, x)
    env_t = np.abs(dtau / np.sin(2 * 2 / 3 * np.abs(p.z(x)) ** 1.5))
    env_x = np.abs(dxi / np.cos(2 * 2 / 3 * np.abs(p.z(x)) ** 1.5))
    slope = math.log((env_x[1] / env_t[1]) / (env_x[0] / env_t[0])) / math.log(e[1] / e[0])
    np.testing.assert_allclose(slope, -1.5, atol=1e-10)


# ------------------------------------------------------------------ box

def test_box_closed_form_vs_sum():
    p = BoxParams(1.0, 15)
    x = np.linspace(0.0, 1.0, 1001)
    d = closedform.box_densities(p, x)
    np.testing.assert_allclose(d["rho"], d["rho_sum"], atol=1e-11)
    np.testing.assert_allclose(d["rho"] - p.rho_tf, d["delta_rho"], atol=1e-11)


@given(M=st.integers(1, 60))
def test_box_opposition_and_normalization(M):
    p = BoxParams(2.0, M)
    g = spectral.Grid.line(0.0, 2.0, n=1999)
    d = closedform.box_densities(p, g.points)
    np.testing.assert_allclose(d["delta_tau"] + d["delta_tau1"], 0.0, atol=1e-9 * p.xi_const)
    fld = closedform.box_field(p, g)
    np.testing.assert_allclose(qdens.integrate_field(fld, fld.rho), 2 * M, rtol=1e-9)


def test_box_field_against_solver():
    p = BoxParams(1.0, 6)
    g = spectral.Grid.line(0.0, 1.0, n=1999)
    sol = spectral.solve_1d(model.box(1.0), g, 8)
    occ = model.fill_levels(sol.energies, sol.degeneracy, 12)
    num = qdens.compute_densities(sol, occ)
    ref = closedform.box_field(p, g)
    np.testing.assert_allclose(num.rho, ref.rho, atol=1e-8)
    np.testing.assert_allclose(num.tau, ref.tau, atol=1e-5 * ref.tau.max())


def test_box_rejects():
    with pytest.raises(ValueError):
        BoxParams(1.0, 0)
    with pytest.raises(ValueError):
        closedform.box_densities(BoxParams(1.0, 3), np.array([1.5]))
