from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from lct.polynomial import Polynomial

small = st.integers(-6, 6)
coeffs = st.lists(small, min_size=0, max_size=6)


def test_laguerre_matches_sympy():
    x = sp.Symbol("x")
    for n in range(8):
        for alpha in (0, 1, Fraction(1, 2)):
            ref = sp.Poly(sp.assoc_laguerre(n, sp.Rational(alpha), x), x).all_coeffs()[::-1]
            got = Polynomial.laguerre(n, alpha).coeffs
            assert [sp.Rational(c) for c in got] == ref


def test_text_round_trip():
    p = Polynomial([1, 0, Fraction(1, 2)])
    assert p.to_text() == "[1, 0, 1/2]"
    assert Polynomial.from_text(p.to_text()) == p


@given(coeffs, coeffs)
def test_ring_laws(a, b):
    p, q = Polynomial(a), Polynomial(b)
    assert p * q == q * p
    assert (p + q) - q == p
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(coeffs, st.integers(-5, 5))
def test_exact_evaluation(a, x):
    p = Polynomial(a)
    assert p(Fraction(x)) == sum(Fraction(c) * x**i for i, c in enumerate(a))


def test_float_evaluation_and_scaling():
    p = Polynomial.laguerre(4)
    x = np.linspace(0, 10, 7)
    q = p.scale_argument(Fraction(3, 2))
    assert np.allclose(q(x), p(1.5 * x), rtol=1e-13, atol=1e-12)
    assert np.allclose(p(x), np.polynomial.polynomial.polyval(x, p.to_numpy()))


def test_power_and_monomial():
    assert Polynomial.monomial(3) == Polynomial([0, 0, 0, 1])
    assert Polynomial([1, 1]) ** 3 == Polynomial([1, 3, 3, 1])
    with pytest.raises(ValueError):
        Polynomial([1]) ** -1
