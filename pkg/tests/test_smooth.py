import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lvtlab import closedform, model, qdens, smooth, spectral


@pytest.mark.parametrize("D", [1, 2, 3])
def test_tf_number_oscillator_closed_form(D):
    # N_TF = 2 (lam/hbar omega)^D / D! for the oscillator
    spec = model.iho(1.0, D)
    np.testing.assert_allclose(smooth.tf_particle_number(spec, 7.0), 2 * 7.0 ** D / math.factorial(D),
                               rtol=1e-11)


def test_find_lambda_examples():
    np.testing.assert_allclose(smooth.find_lambda_tf(model.box(1.0), 40), math.pi ** 2 / 2 * 400, rtol=1e-12)
    np.testing.assert_allclose(smooth.find_lambda_tf(model.disk_billiard(1.0), 68), 136.0, rtol=1e-12)
    lam = smooth.find_lambda_tf(model.coupled_quartic(0.6), 200)
    np.testing.assert_allclose(smooth.tf_particle_number(model.coupled_quartic(0.6), lam), 200, rtol=1e-10)


def test_tf_number_coupled_quartic_vs_grid():
    spec = model.coupled_quartic(0.6)
    g = spectral.Grid.plane(4.0, 401)
    lam = 10.0
    sm = smooth.tf_densities(spec, lam, g)
    np.testing.assert_allclose(sm.rho_tf.sum() * g.h ** 2, smooth.tf_particle_number(spec, lam), rtol=2e-3)


@settings(max_examples=30, deadline=None)
@given(D=st.sampled_from([1, 2, 3]), rho=st.floats(1e-3, 1e3))
def test_tf_functional_inverts_densities(D, rho):
    # rho_TF(e) and tau_TF(e) must satisfy tau = tau_TF[rho]
    pref = (1 / math.gamma(D / 2)) * (1 / (2 * math.pi)) ** (D / 2)
    e = (rho / ((4 / D) * pref)) ** (2 / D)
    tau = (4 / (D + 2)) * pref * e ** (D / 2 + 1)
    np.testing.assert_allclose(smooth.tf_functional(rho, D), tau, rtol=1e-12)


def test_weyl_disk():
    np.testing.assert_allclose(smooth.weyl_lambda_disk(68), 160.68303, atol=1e-3)
    three = smooth.weyl_lambda_disk(68, curvature=False)
    assert abs(three - 160.68303) > 1e-3
    with pytest.raises(ValueError):
        smooth.weyl_lambda_disk(67)


def test_interior_mask_radial_oscillator():
    fld = closedform.iho_densities(10, 3)
    lam = fld.lambda_used
    sm = smooth.tf_densities(fld.spec, lam, fld)
    r = fld.coord
    w = 4.0 / (2 * math.sqrt(2 * lam))
    rt = math.sqrt(2 * lam)
    assert sm.interior_mask[0]
    assert r[sm.interior_mask].max() <= rt - w + 1e-12
    np.testing.assert_allclose(r[sm.interior_mask].max(), min(rt - w, math.sqrt(2 * 0.95 * lam)), atol=2 * fld.h)


def test_interior_mask_line_walls():
    g = spectral.Grid.line(0.0, 1.0, n=999)
    sm = smooth.tf_densities(model.box(1.0), 100.0, g)
    w = 4.0 / (2 * math.sqrt(200.0))
    x = g.points[sm.interior_mask]
    np.testing.assert_allclose([x.min(), 1 - x.max()], [w, w], atol=2e-3)


def test_interior_mask_empty_raises():
    fld = closedform.iho_densities(0, 1)
    with pytest.raises(ValueError, match="empty"):
        smooth.tf_densities(fld.spec, 0.5, fld, mask_c=40.0)


def test_oscillating_parts_split():
    fld = closedform.iho_densities(8, 2)
    sm = smooth.tf_densities(fld.spec, fld.lambda_used, fld)
    osc = smooth.oscillating_parts(fld, sm)
    np.testing.assert_allclose(osc.delta_r_tau + osc.delta_r_tau1, 0.0, atol=1e-12)
    np.testing.assert_allclose(osc.delta_rho + sm.rho_tf, fld.rho)
    with pytest.raises(ValueError):
        smooth.oscillating_parts(closedform.iho_densities(8, 2, h=0.02), sm)


def test_local_average_damps_short_waves():
    g = spectral.Grid.line(0.0, 20.0, h=0.01)
    x = g.points
    width = 0.5
    smooth_part = 1.0 + 0.01 * x
    wave = np.cos(2 * math.pi * x / width)
    avg = smooth.local_average(smooth_part + wave, g, width)
    core = slice(200, -200)
    np.testing.assert_allclose(avg[core], smooth_part[core], atol=1e-2)


def test_local_mode_needs_field():
    spec = model.radial_power(0.5, 4.0, 2)
    lt = smooth.find_lambda_tf(spec, 498)
    g = spectral.Grid.radial(spec.turning_radius(lt) + 2.5, h=0.01)
    sol, occ = spectral.solve_radial_for_N(spec, 498, g)
    fld = qdens.compute_densities(sol, occ)
    sm = smooth.tf_densities(spec, lt, g, mode="local", field=fld)
    assert sm.mode == "local" and sm.xi_smooth.shape == fld.xi.shape
    assert not np.allclose(sm.xi_smooth, sm.xi_tf)
    with pytest.raises(ValueError):
        smooth.tf_densities(spec, lt, g, mode="local")
    with pytest.raises(ValueError):
        smooth.tf_densities(spec, lt, g, mode="ETF")
