"""Laguerre/Legendre evaluation and the exact identities built on them.

Floating-point routines accept scalars or numpy arrays (complex arguments
are fine for the polynomial evaluators).  Exact routines return
``Fraction``/``Polynomial`` objects.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import special as sps

from .polynomial import Polynomial, _fact

__all__ = [
    "LaguerreIndex", "laguerre_eval", "laguerre_sum", "laguerre_function_eval",
    "legendre_eval", "gen_binom", "laguerre_product_integral", "n_polynomial",
    "n_polynomial_gamma_sum", "cumulative_laguerre_sq", "laguerre_derivative",
    "ell_sq_derivative", "lambda_fn", "lambda_pointwise_bound",
    "lambda_bound_integral", "alternating_sum_S", "cesaro_bound",
    "power_exp", "power_exp_bound", "ell_sq",
]


class LaguerreIndex(NamedTuple):
    """Degree n and type parameter alpha of L_n^(alpha)."""
    n: int
    alpha: float = 0.0

    def __call__(self, x):
        return laguerre_eval(self.n, x, self.alpha)


def _out(a):
    a = np.asarray(a)
    return a if a.ndim else a[()]


def laguerre_eval(n, x, alpha=0.0):
    """L_n^(alpha)(x) by the three-term recurrence.  L_n = 0 for n < 0."""
    x = np.asarray(x)
    dt = np.result_type(x, float)
    if n < 0:
        return _out(np.zeros_like(x, dtype=dt))
    p0 = np.ones_like(x, dtype=dt)
    if n == 0:
        return _out(p0)
    p1 = 1.0 + alpha - x
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1 + alpha - x) * p1 - (m + alpha) * p0) / (m + 1)
    return _out(p1)


def gen_binom(a, b):
    """Generalized binomial C(a, b) = Gamma(a+1) / (Gamma(b+1) Gamma(a-b+1)).

    Integer b >= 0 uses the falling factorial, which is the continuous
    extension across Gamma poles.  Otherwise any divergent Gamma ratio
    (a pole in the numerator) is mapped to 0, and a pole in a denominator
    gives 0 through 1/Gamma.
    """
    if float(b).is_integer():
        b = int(b)
        if b < 0:
            return 0.0
        out = 1.0
        for i in range(b):
            out *= (a - i)
        return out / math.factorial(b)
    if float(a + 1).is_integer() and a + 1 <= 0:
        return 0.0
    return float(sps.gamma(a + 1) * sps.rgamma(b + 1) * sps.rgamma(a - b + 1))


def laguerre_sum(n, x, alpha=0.0):
    """L_n^(alpha) from the explicit factorial sum.  Test oracle only.

    Rational alpha with real x is summed exactly (the float sum cancels
    badly for large n); other input falls back to floating point.
    """
    x = np.asarray(x)
    if n >= 0 and float(alpha).is_integer() and np.isrealobj(x):
        P = Polynomial.laguerre(n, int(alpha))
        ev = np.vectorize(lambda t: float(P(Fraction(float(t)))), otypes=[float])
        return _out(ev(x))
    if n < 0:
        return _out(np.zeros_like(x, dtype=np.result_type(x, float)))
    acc = np.zeros_like(x, dtype=np.result_type(x, float))
    for i in range(n + 1):
        acc = acc + (-1) ** i * gen_binom(n + alpha, n - i) * x**i / math.factorial(i)
    return _out(acc)


def laguerre_function_eval(n, y, alpha=0.0):
    """Laguerre function [n!/Gamma(n+alpha+1)]^(1/2) y^(alpha/2) e^(-y/2) L_n^(alpha)(y)."""
    if alpha <= -1:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    y = np.asarray(y)
    norm = math.exp(0.5 * (math.lgamma(n + 1) - math.lgamma(n + alpha + 1))) if n >= 0 else 0.0
    pre = np.exp(-0.5 * y)
    if alpha != 0:
        pre = pre * y ** (0.5 * alpha)
    return _out(norm * pre * laguerre_eval(n, y, alpha))


def ell_sq(k, x):
    """ell_k(x)^2 for the alpha = 0 family."""
    x = np.asarray(x)
    return _out(np.exp(-x) * laguerre_eval(k, x) ** 2)


def legendre_eval(n, x, check=True):
    """Legendre polynomial P_n(x) on [-1, 1] by Bonnet's recurrence."""
    x = np.asarray(x, dtype=float)
    if check and np.any((x < -1 - 1e-12) | (x > 1 + 1e-12)):
        raise ValueError("Legendre argument outside [-1, 1]")
    p0 = np.ones_like(x)
    if n == 0:
        return _out(p0)
    p1 = x.copy()
    for m in range(1, n):
        p0, p1 = p1, ((2 * m + 1) * x * p1 - m * p0) / (m + 1)
    return _out(p1)


def laguerre_product_integral(p, alpha, beta, m, n):
    """Closed form of int_0^inf x^p e^-x L_m^(alpha) L_n^(beta) dx."""
    if p <= -1:
        raise ValueError("p must exceed -1")
    acc = 0.0
    for i in range(min(m, n) + 1):
        acc += gen_binom(p - alpha, m - i) * gen_binom(p - beta, n - i) * gen_binom(p + i, i)
    return (-1) ** (m + n) * math.gamma(p + 1) * acc


@lru_cache(maxsize=None)
def n_polynomial(k):
    """N_{2k} with int_0^x ell_k^2 = 1 - N_{2k}(x) e^-x, exact coefficients.

    If P = L_k^2 then -(e^-t Q)' = e^-t P for Q = P + P' + P'' + ...
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    P = Polynomial.laguerre(k) ** 2
    Q = Polynomial()
    d = P
    while not d.is_zero():
        Q = Q + d
        d = d.derivative()
    return Q


def n_polynomial_gamma_sum(k):
    """N_{2k} from the incomplete-Gamma triple sum (independent cross-check)."""
    L = Polynomial.laguerre(k)
    acc = Polynomial()
    for i in range(k + 1):
        for j in range(k):
            c = (-1) ** (i + j) * math.comb(k, i) * math.comb(k, j + 1) * math.comb(i + j, i)
            if c == 0:
                continue
            acc = acc + Polynomial([Fraction(c, _fact(p)) for p in range(i + j + 1)])
    return L * L - 2 * acc


@lru_cache(maxsize=None)
def _n_float(k):
    c = n_polynomial(k).to_numpy()
    c[0] -= 1.0           # N_{2k}(0) = 1 and N'(0) = 0, so keep N - 1 separately
    return c


def cumulative_laguerre_sq(k, x):
    """int_0^x ell_k(t)^2 dt = 1 - N_{2k}(x) e^-x, for x >= 0.

    Written as -expm1(-x) - (N(x)-1) e^-x; N - 1 = O(x^2) so small x keeps
    full relative accuracy.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    c = _n_float(k)
    nm1 = np.polynomial.polynomial.polyval(x, c)
    with np.errstate(over="ignore", invalid="ignore"):
        tail = np.where(x > 700, 0.0, nm1 * np.exp(-np.minimum(x, 700)))
    return _out(-np.expm1(-x) - tail)


def laguerre_derivative(n, r, x, alpha=0.0):
    """r-th derivative of L_n^(alpha): (-1)^r L_{n-r}^(alpha+r)(x)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return _out((-1) ** r * np.asarray(laguerre_eval(n - r, x, alpha + r)))


def ell_sq_derivative(k, n, v, xi):
    """n-th xi-derivative of ell_k^2(2 v xi)."""
    v = np.asarray(v, dtype=float)
    xi = np.asarray(xi, dtype=float)
    y = 2 * v * xi
    acc = np.zeros(np.broadcast(v, xi).shape)
    for i in range(n + 1):
        for j in range(i + 1):
            if k - i + j < 0 or k - j < 0:
                continue
            acc = acc + (math.comb(n, i) * math.comb(i, j)
                         * laguerre_eval(k - i + j, y, i - j) * laguerre_eval(k - j, y, j))
    return _out((-2 * v) ** n * np.exp(-y) * acc)


def _cesaro_coeffs(n, alpha):
    # (alpha+1)_{n-i} / ((n-i)! i!), i = 0..n
    return np.array([sps.poch(alpha + 1, n - i) / (math.factorial(n - i) * math.factorial(i))
                     for i in range(n + 1)])


def lambda_fn(p, m, n, alpha, beta, x):
    """Lambda_{p,m,n}^(alpha,beta)(x) = x^p e^-x |L_m^(alpha) L_n^(beta)|."""
    x = np.asarray(x, dtype=float)
    return _out(x**p * np.exp(-x) * np.abs(laguerre_eval(m, x, alpha) * laguerre_eval(n, x, beta)))


def lambda_pointwise_bound(p, m, n, alpha, beta, x):
    """Product of Cesaro-mean bounds times x^p e^-x."""
    x = np.asarray(x, dtype=float)
    return _out(x**p * np.exp(-x) * cesaro_bound(m, alpha, x) * cesaro_bound(n, beta, x))


def lambda_bound_integral(p, m, n, alpha, beta):
    """Integrated pointwise bound: sum_ij c_i d_j Gamma(p+i+j+1)."""
    if alpha < -0.5 or beta < -0.5:
        raise ValueError("alpha, beta must be >= -1/2")
    if p <= -1:
        raise ValueError("p must exceed -1")
    ci = _cesaro_coeffs(m, alpha)
    dj = _cesaro_coeffs(n, beta)
    return float(sum(ci[i] * dj[j] * math.gamma(p + i + j + 1)
                     for i in range(m + 1) for j in range(n + 1)))


def cesaro_bound(n, alpha, x):
    """sum_i (alpha+1)_{n-i} / ((n-i)! i!) x^i, an upper bound for |L_n^(alpha)(x)|."""
    if alpha < -0.5:
        raise ValueError("alpha must be >= -1/2")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    return _out(np.polynomial.polynomial.polyval(x, _cesaro_coeffs(n, alpha)))


def alternating_sum_S(k):
    """S(k) = sum_ij (-1)^(i+j) C(k,i) C(k,j+1) C(i+j,i), exact."""
    if k < 1:
        raise ValueError("k must be >= 1")
    s = 0
    for i in range(k + 1):
        for j in range(k):
            s += (-1) ** (i + j) * math.comb(k, i) * math.comb(k, j + 1) * math.comb(i + j, i)
    return Fraction(s)


def power_exp(p, q, x):
    x = np.asarray(x, dtype=float)
    return _out(x**p * np.exp(-q * x))


def power_exp_bound(p, q):
    """Maximum of x^p e^(-qx) over x >= 0, attained at x = p/q."""
    if p <= 0 or q <= 0:
        raise ValueError("p, q must be positive")
    return (p / (math.e * q)) ** p


def laguerre_coefficients(k, alpha=0):
    """Float coefficients of L_k^(alpha) (ascending), from the exact expansion."""
    return Polynomial.laguerre(k, Fraction(alpha)).to_numpy()

