import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lvtlab import quad


def test_fornberg_central_second_derivative():
    c = quad.fornberg(0.0, np.array([-1.0, 0.0, 1.0]), 2)
    np.testing.assert_allclose(c[2], [1.0, -2.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(c[1], [-0.5, 0.0, 0.5], atol=1e-14)
    np.testing.assert_allclose(c[0], [0.0, 1.0, 0.0], atol=1e-14)


@given(k=st.integers(1, 3), shift=st.floats(-2.0, 2.0))
def test_fornberg_weights_annihilate_constants(k, shift):
    c = quad.fornberg(shift, np.arange(-3.0, 4.0), k)
    assert abs(c[k].sum()) < 1e-9


def test_derivative_sine_high_order():
    h = 0.01
    x = np.arange(0, 400) * h
    d = quad.derivative(np.sin(x), h, 1)
    np.testing.assert_allclose(d, np.cos(x), atol=1e-9)
    d2 = quad.derivative(np.sin(x), h, 2)
    np.testing.assert_allclose(d2, -np.sin(x), atol=1e-6)


def test_derivative_parity_at_origin():
    h = 0.02
    r = np.arange(0, 200) * h
    d = quad.derivative(np.cos(r), h, 1, parity=1)
    np.testing.assert_allclose(d, -np.sin(r), atol=1e-9)


def test_derivative_too_short():
    with pytest.raises(ValueError):
        quad.derivative(np.ones(5), 0.1, 1)


def test_integrate_gaussian():
    h = 0.05
    x = np.arange(-200, 201) * h
    np.testing.assert_allclose(quad.integrate(np.exp(-x * x), h), math.sqrt(math.pi), rtol=1e-13)


def test_integrate_polynomial_endpoints():
    # Euler-Maclaurin corrections make low-order polynomials exact
    h = 0.1
    x = np.arange(0, 31) * h
    np.testing.assert_allclose(quad.integrate(x ** 5, h), 3.0 ** 6 / 6, rtol=1e-12)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.3, 3.0))
def test_tail_integral_exponential(a):
    h = 0.01
    x = np.arange(0, 1001) * h
    T = quad.tail_integral(np.exp(-a * x), h)
    exact = (np.exp(-a * x) - np.exp(-a * x[-1])) / a
    np.testing.assert_allclose(T, exact, atol=1e-10)


def test_tail_integral_consistent_with_integrate():
    h = 0.02
    x = np.arange(0, 301) * h
    g = np.sin(x) * np.exp(-x)
    np.testing.assert_allclose(quad.tail_integral(g, h)[0], quad.integrate(g, h), atol=1e-13)


def test_with_origin_even_function():
    r = np.arange(1, 50) * 0.05
    full = quad.with_origin(np.cos(r) * np.exp(-r * r), r)
    np.testing.assert_allclose(full[0], 1.0, atol=1e-8)
    assert full.shape == (50,)
