import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from lvtlab import specfun
from lvtlab.specfun import DomainError


def test_airy_origin_values():
    np.testing.assert_allclose(specfun.airy_ai(0.0), 0.3550280538878172, atol=1e-15)
    np.testing.assert_allclose(specfun.airy_ai_prime(0.0), -0.2588194037928068, atol=1e-15)
    np.testing.assert_allclose(specfun.airy_ai_prime(1.0), -0.1591474413, atol=1e-10)


@pytest.mark.parametrize("z", [-9.9, -7.3, -5.0, -3.26, -1.0, 0.7, 1.75, 3.3, 5.0, 8.8, 10.0])
def test_airy_against_mpmath(z):
    np.testing.assert_allclose(specfun.airy_ai(z), float(mpmath.airyai(z)), atol=1e-12)
    np.testing.assert_allclose(specfun.airy_ai_prime(z), float(mpmath.airyai(z, derivative=1)),
                               atol=1e-11)


def test_airy_dense_against_scipy():
    z = np.linspace(-10, 10, 20001)
    ai, aip = specfun.airy(z)
    ref = special.airy(z)
    np.testing.assert_allclose(ai, ref[0], atol=1e-12)
    np.testing.assert_allclose(aip, ref[1], atol=1e-11)


def test_airy_far_field():
    z = np.array([-1e4, -500.0, -40.0, 20.0, 100.0])
    ai, aip = specfun.airy(z)
    ref = special.airy(z)
    np.testing.assert_allclose(ai, ref[0], rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(aip, ref[1], rtol=1e-10, atol=1e-14)


def test_airy_negative_envelope():
    # |z|^{1/4} Ai(z) oscillates with amplitude 1/sqrt(pi)
    z = np.linspace(-3000, -2000, 200001)
    env = np.abs(z) ** 0.25 * specfun.airy_ai(z)
    np.testing.assert_allclose(env.max(), 1 / math.sqrt(math.pi), rtol=1e-4)


def test_airy_positive_decay_monotone():
    z = np.linspace(1.0, 30.0, 3000)
    ai = specfun.airy_ai(z)
    assert np.all(np.diff(ai) < 0) and np.all(ai > 0)


def test_airy_ode_residual():
    z = np.linspace(-20, 5, 2501)
    h = 1e-2
    f = specfun.airy_ai
    d2 = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)
    assert np.max(np.abs(d2 - z * f(z))) <= 1e-6


def test_airy_prime_central_difference():
    z = np.linspace(-12, 12, 481)
    h = 1e-3
    fd = (specfun.airy_ai(z + h) - specfun.airy_ai(z - h)) / (2 * h)
    np.testing.assert_allclose(specfun.airy_ai_prime(z), fd, atol=5e-6)
    # the O(h^2) error is known from the ODE: Ai''' = Ai + z Ai'
    corr = h * h / 6 * (specfun.airy_ai(z) + z * specfun.airy_ai_prime(z))
    np.testing.assert_allclose(specfun.airy_ai_prime(z), fd - corr, atol=1e-8)


def test_airy_prime_by_quadrature():
    # Ai'(b) - Ai'(a) = int_a^b z Ai(z) dz
    from scipy.integrate import quad
    val, _ = quad(lambda t: t * specfun.airy_ai(t), -6.0, 2.0, epsabs=1e-13, limit=200)
    np.testing.assert_allclose(specfun.airy_ai_prime(2.0) - specfun.airy_ai_prime(-6.0), val,
                               atol=1e-11)


def test_airy_domain():
    with pytest.raises(DomainError):
        specfun.airy_ai(2e4)
    with pytest.raises(DomainError):
        specfun.airy_ai(np.nan)


def test_bessel_examples():
    assert specfun.bessel_j(0, 0.0) == 1.0
    assert specfun.bessel_j(1, 0.0) == 0.0
    np.testing.assert_allclose(specfun.bessel_j(0.5, math.pi / 2), 2 / math.pi, atol=1e-15)


@pytest.mark.parametrize("nu", [0, 0.25, 0.5, 1, 1.5, 2, 2.5, 3.7, 10, 20.5, 40])
def test_bessel_against_scipy(nu):
    z = np.linspace(0, 100, 5001)
    np.testing.assert_allclose(specfun.bessel_j(nu, z), special.jv(nu, z), atol=1e-10)


@pytest.mark.parametrize("nu,z", [(0.0, 37.3), (1.0, 88.1), (1.5, 12.0), (7.3, 55.5), (30.0, 31.0)])
def test_bessel_against_mpmath(nu, z):
    np.testing.assert_allclose(specfun.bessel_j(nu, z), float(mpmath.besselj(nu, z)), atol=1e-12)


def test_bessel_negative_fractional_order():
    z = np.linspace(0.01, 100, 4001)
    np.testing.assert_allclose(specfun.bessel_j(-0.3, z), special.jv(-0.3, z), atol=1e-10)
    assert specfun.bessel_j(-0.3, 0.0) == np.inf


def test_bessel_half_integer_closed_form():
    z = np.linspace(0.1, 50, 500)
    np.testing.assert_allclose(specfun.bessel_j(1.5, z),
                               np.sqrt(2 / (np.pi * z)) * (np.sin(z) / z - np.cos(z)), atol=1e-13)
    np.testing.assert_allclose(specfun.bessel_j(-0.5, z), np.sqrt(2 / (np.pi * z)) * np.cos(z),
                               atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(0.5, 30.0), z=st.floats(0.05, 100.0))
def test_bessel_recurrence(nu, z):
    lhs = specfun.bessel_j(nu - 1, z) + specfun.bessel_j(nu + 1, z)
    assert abs(lhs - 2 * nu / z * specfun.bessel_j(nu, z)) <= 1e-9


def test_bessel_domain():
    with pytest.raises(DomainError):
        specfun.bessel_j(0, -1.0)
    with pytest.raises(DomainError):
        specfun.bessel_j(-1.0, 1.0)


def test_bessel_zeros():
    np.testing.assert_allclose(specfun.bessel_j_zeros(0, 20.0), special.jn_zeros(0, 6), rtol=1e-13)
    np.testing.assert_allclose(specfun.bessel_j_zeros(3, 30.0), special.jn_zeros(3, 8), rtol=1e-13)


def test_ho_examples():
    np.testing.assert_allclose(specfun.ho_eigenfunction(0, 0.0), math.pi ** -0.25, rtol=1e-15)
    assert specfun.ho_eigenfunction(1, 0.0) == 0.0


def test_ho_orthonormal():
    x = np.linspace(-15, 15, 6001)
    phi = specfun.ho_eigenfunctions(6, x)
    gram = np.trapezoid(phi[:, None, :] * phi[None, :, :], x, axis=-1)
    np.testing.assert_allclose(gram, np.eye(7), atol=1e-8)
    assert abs(np.trapezoid(phi[2] * phi[4], x)) < 1e-8


def test_ho_against_hermite():
    x = np.linspace(-6, 6, 121)
    for n in range(12):
        h = special.eval_hermite(n, x)
        ref = h * np.exp(-x * x / 2) / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
        np.testing.assert_allclose(specfun.ho_eigenfunction(n, x), ref, atol=1e-13)


def test_ho_scaled_frequency_and_derivative():
    w, m = 2.5, 0.7
    x = np.linspace(-8, 8, 1601)
    phi, dphi = specfun.ho_eigenfunctions(5, x, omega=w, mass=m, derivatives=True)
    np.testing.assert_allclose(np.trapezoid(phi ** 2, x, axis=1), 1.0, atol=1e-8)
    np.testing.assert_allclose(dphi[:, 1:-1], (phi[:, 2:] - phi[:, :-2]) / (x[2] - x[0]), atol=2e-3)


def test_ho_high_order_finite():
    x = np.linspace(-150, 150, 60001)
    phi = specfun.ho_eigenfunction(10000, x)
    assert np.all(np.isfinite(phi))
    np.testing.assert_allclose(np.trapezoid(phi ** 2, x), 1.0, atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 60), x=st.floats(-12, 12))
def test_ho_parity(n, x):
    assert specfun.ho_eigenfunction(n, -x) == (-1) ** n * specfun.ho_eigenfunction(n, x)
