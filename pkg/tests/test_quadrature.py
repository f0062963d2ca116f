import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from lct.quadrature import (ConvergenceError, IntegrationError, IntegrationResult, QuadratureSpec,
                            default_tolerance, gauss_laguerre_rule, integrate_finite,
                            integrate_halfline, integrate_oscillatory_halfline, integrate_ray)
from lct.special import ell_sq


@pytest.mark.parametrize("scheme", ["gauss_laguerre", "adaptive_subdivision", "tail_split"])
def test_halfline_schemes(scheme):
    spec = QuadratureSpec(scheme=scheme)
    r = integrate_halfline(lambda x: np.exp(-x), spec)
    assert r.converged and abs(r.value - 1) < 1e-12
    r = integrate_halfline(lambda x: 0.5 * x * ell_sq(2, x), spec)
    assert abs(r.value - 2.5) < 1e-10


def test_oscillatory():
    r = integrate_oscillatory_halfline(lambda x: np.exp(-x), 1.0, analytic=True)
    assert abs(r.value - (1 + 1j) / 2) < 1e-13
    r = integrate_oscillatory_halfline(lambda x: np.exp(-x), 1.0)
    assert abs(r.value - (1 + 1j) / 2) < 1e-12
    for w in (30.0, 300.0, 3000.0):
        r = integrate_oscillatory_halfline(lambda x: x * np.exp(-x), w, analytic=True)
        assert abs(r.value - 1 / (1 - 1j * w) ** 2) < 1e-14


def test_ray():
    # int_0^inf e^{-(1 - i) x} along a rotated ray
    r = integrate_ray(lambda z: np.exp(-(1 - 1j) * z), 0.0, math.atan2(1, 1), 1.0)
    assert abs(r.value - 1 / (1 - 1j)) < 1e-13


def test_finite_with_breakpoints():
    f = lambda x: np.where(x < 0.3, 1.0, np.sqrt(x))
    r = integrate_finite(f, 0, 2, breakpoints=[0.3])
    ref = 0.3 + (2 ** 1.5 - 0.3 ** 1.5) / 1.5
    assert abs(r.value - ref) < 1e-12
    assert r.evaluations > 0 and r.error_estimate < 1e-10


def test_long_interval_roundoff_floor():
    r = integrate_finite(lambda x: np.exp(-x), 0.0, 100.0)
    assert r.converged and abs(r.value + math.expm1(-100)) < 1e-13


def test_nonfinite_integrand_raises():
    with pytest.raises(IntegrationError):
        integrate_finite(lambda x: np.where(x > 0.5, np.inf, 1.0), 0, 1)


def test_result_helpers():
    r = IntegrationResult(1 + 0j, 1e-3, 10, False)
    with pytest.raises(ConvergenceError):
        r.require()
    s = (r + IntegrationResult(2.0, 1e-3, 5, True)).scaled(2)
    assert s.value == 6 and s.evaluations == 15 and not s.converged


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("LCT_TOL", "1e-6")
    assert default_tolerance() == 1e-6
    assert QuadratureSpec().abs_tol == 1e-6
    monkeypatch.setenv("LCT_TOL", "-1")
    with pytest.raises(ValueError):
        default_tolerance()


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="bogus")
    with pytest.raises(ValueError):
        QuadratureSpec(node_count=1)


def test_gauss_laguerre_rule():
    x, w = gauss_laguerre_rule(20)
    for n in range(10):
        assert abs(np.sum(w * x**n) - math.factorial(n)) < 1e-12 * math.factorial(n)


@given(st.floats(0.1, 5), st.floats(0.1, 10))
def test_halfline_exact(a, b):
    f = lambda x: np.exp(-a * x) * np.cos(b * x) ** 2
    exact = 1 / (2 * a) + a / (2 * (a * a + 4 * b * b))
    r = integrate_halfline(f)
    assert abs(r.value - exact) < 1e-10


@given(st.floats(0.2, 4), st.integers(0, 6))
def test_halfline_vs_scipy(a, n):
    f = lambda x: x**n * np.exp(-a * x) / (1 + x)
    ref, _ = quad(f, 0, np.inf, limit=400, epsabs=1e-13, epsrel=1e-12)
    assert abs(integrate_halfline(f).value - ref) < 1e-9 * max(1, ref)
