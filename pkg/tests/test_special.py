import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, strategies as st
from scipy.integrate import quad

from lct import special as sf
from lct.polynomial import Polynomial


def test_laguerre_recurrence_vs_scipy():
    x = np.linspace(0, 60, 301)
    for n in range(0, 25):
        for alpha in (0.0, 0.5, 1.0, 3.0):
            ref = sps.eval_genlaguerre(n, alpha, x)
            got = sf.laguerre_eval(n, x, alpha)
            scale = np.abs(sps.eval_genlaguerre(n, alpha, -x)) + 1
            assert np.all(np.abs(got - ref) <= 1e-12 * scale)


def test_laguerre_recurrence_vs_exact_sum():
    # exact rational oracle at rational points, integer alpha
    for n in (5, 12, 20):
        for alpha in (0, 2):
            for x in (Fraction(1, 3), Fraction(7, 2), Fraction(25)):
                exact = sf.laguerre_sum(n, x, alpha)
                got = sf.laguerre_eval(n, float(x), alpha)
                bound = float(sf.laguerre_sum(n, -x, alpha))
                assert abs(got - float(exact)) <= 1e-12 * abs(float(exact)) + 1e-16 * bound


def test_laguerre_negative_degree_and_complex():
    assert sf.laguerre_eval(-1, 2.0) == 0
    z = 0.3 + 1.1j
    assert abs(sf.laguerre_eval(3, z) - complex(mpmath.laguerre(3, 0, z))) < 1e-14


def test_laguerre_function_normalization():
    for k in range(6):
        val, _ = quad(lambda y: sf.ell_sq(k, y), 0, np.inf, limit=200)
        assert abs(val - 1) < 1e-9
    y = np.linspace(0.1, 20, 5)
    got = sf.laguerre_function_eval(3, y, 2.0)
    ref = np.sqrt(math.factorial(3) / math.gamma(6)) * y * np.exp(-y / 2) * sps.eval_genlaguerre(3, 2, y)
    assert np.allclose(got, ref, rtol=1e-13)


def test_legendre_vs_scipy():
    x = np.linspace(-1, 1, 101)
    for n in range(12):
        assert np.allclose(sf.legendre_eval(n, x), sps.eval_legendre(n, x), atol=1e-14)
    with pytest.raises(ValueError):
        sf.legendre_eval(2, 1.5)


@pytest.mark.parametrize("p", [0, 0.5, 1, 2, 3])
def test_laguerre_product_integral(p):
    for al in (0, 1):
        for be in (0, 1):
            for m in range(5):
                for n in range(5):
                    f = lambda x: x**p * math.exp(-x) * sps.eval_genlaguerre(m, al, x) * sps.eval_genlaguerre(n, be, x)
                    ref, _ = quad(f, 0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=400)
                    got = sf.laguerre_product_integral(p, al, be, m, n)
                    assert abs(got - ref) <= 1e-9 * max(1, abs(ref))


def test_laguerre_product_integral_value():
    # int x e^-x L_3^2 = 2*3 + 1 = 7
    assert abs(sf.laguerre_product_integral(1, 0, 0, 3, 3) - 7) < 1e-12


def test_gen_binom_conventions():
    assert sf.gen_binom(5, 2) == 10
    assert sf.gen_binom(-1, 3) == -1
    assert sf.gen_binom(2, 5) == 0
    assert abs(sf.gen_binom(0.5, 2) - (-0.125)) < 1e-15


def test_n_polynomial():
    assert sf.n_polynomial(1) == Polynomial([1, 0, 1])
    for k in range(9):
        assert sf.n_polynomial(k) == sf.n_polynomial_gamma_sum(k)


def test_alternating_sum_vanishes():
    for k in range(1, 13):
        assert sf.alternating_sum_S(k) == 0


def test_cumulative_vs_quadrature():
    for k in range(9):
        for x in (1e-3, 0.5, 3.0, 17.0, 60.0):
            ref, _ = quad(lambda t: sf.ell_sq(k, t), 0, x, epsabs=1e-13, epsrel=1e-12, limit=200)
            assert abs(sf.cumulative_laguerre_sq(k, x) - ref) < 1e-10
    # small-x relative accuracy: int_0^x e^-t dt for k = 0
    assert abs(sf.cumulative_laguerre_sq(0, 1e-12) / (-math.expm1(-1e-12)) - 1) < 1e-12


def test_derivatives():
    x = np.linspace(0.1, 10, 9)
    for n in range(6):
        for r in range(4):
            ref = sps.eval_genlaguerre(n - r, r, x) * (-1) ** r if n >= r else 0 * x
            assert np.allclose(sf.laguerre_derivative(n, r, x), ref, atol=1e-12)
    # d^2/dxi^2 ell_0^2(2 v xi) at v = xi = 1: 4 e^-2
    assert abs(sf.ell_sq_derivative(0, 2, 1.0, 1.0) - 4 * math.exp(-2)) < 1e-15
    for k in range(4):
        for n in (1, 2):
            f = lambda z: mpmath.diff(lambda q: mpmath.exp(-2 * 0.7 * q) * mpmath.laguerre(k, 0, 2 * 0.7 * q) ** 2, z, n)
            assert abs(sf.ell_sq_derivative(k, n, 0.7, 1.3) - float(f(1.3))) < 1e-12


def test_cesaro_bound_holds(rng):
    for _ in range(500):
        n = int(rng.integers(0, 21))
        al = float(rng.uniform(-0.5, 3))
        x = float(rng.uniform(0, 60))
        assert abs(sps.eval_genlaguerre(n, al, x)) <= sf.cesaro_bound(n, al, x) * (1 + 1e-12)


def test_lambda_bound_integral_hand_expansion():
    # alpha = 0, degree 1: the Cesaro coefficients are (1, 1)
    # p = 0, m = n = 1: sum over i, j in {0, 1} of Gamma(i + j + 1) = 1 + 1 + 1 + 2
    assert abs(sf.lambda_bound_integral(0, 1, 1, 0, 0) - 5) < 1e-12
    # p = 1, m = 1, n = 0: Gamma(2) + Gamma(3) = 3
    assert abs(sf.lambda_bound_integral(1, 1, 0, 0, 0) - 3) < 1e-12
    got = sf.lambda_bound_integral(1, 2, 3, 0.5, 1.0)
    ref, _ = quad(lambda x: sf.lambda_pointwise_bound(1, 2, 3, 0.5, 1.0, x), 0, np.inf, limit=200)
    assert abs(got - ref) < 1e-8 * ref
    actual, _ = quad(lambda x: sf.lambda_fn(1, 2, 3, 0.5, 1.0, x), 0, np.inf, limit=200)
    assert actual <= got


def test_cesaro_bound_value():
    # n = 2, alpha = 0: (1)_2/2! + (1)_1 x + x^2/2 at x = 3
    assert abs(sf.cesaro_bound(2, 0, 3.0) - 8.5) < 1e-14
    with pytest.raises(ValueError):
        sf.cesaro_bound(2, -0.7, 1.0)


@given(st.floats(0.05, 10), st.floats(0.05, 5), st.floats(0, 100))
def test_power_exp_bound(p, q, x):
    assert sf.power_exp(p, q, x) <= sf.power_exp_bound(p, q) * (1 + 1e-12)


@given(st.integers(0, 15), st.floats(0, 40))
def test_laguerre_function_bounded(k, y):
    # |ell_k| <= 1 on [0, inf)
    assert abs(sf.laguerre_function_eval(k, y)) <= 1 + 1e-12


def test_laguerre_coefficients():
    c = sf.laguerre_coefficients(2)
    assert np.allclose(c, [1, -2, 0.5])
