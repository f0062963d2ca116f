"""Exact-coefficient univariate polynomials over the rationals."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c.strip())
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"cannot make an exact coefficient from {c!r}")


class Polynomial:
    """Polynomial with ``Fraction`` coefficients in ascending degree.

    Trailing zeros are stripped on construction, so ``degree`` is exact.
    The zero polynomial has ``coeffs == ()`` and degree -1.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1

    def is_zero(self):
        return not self._c

    @classmethod
    def monomial(cls, n, c=1):
        return cls([0] * n + [c])

    @classmethod
    def laguerre(cls, n, alpha=0):
        """Explicit L_n^(alpha) with exact rational coefficients.

        alpha must be rational.  Uses C(n+alpha, n-i) / i! with the falling
        factorial form of the binomial, valid for any rational alpha.
        """
        if n < 0:
            return cls()
        alpha = _frac(alpha)
        out = []
        for i in range(n + 1):
            out.append((-1) ** i * _binom_frac(n + alpha, n - i) / _fact(i))
        return cls(out)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self._c), len(other._c))
        a = self._c + (Fraction(0),) * (n - len(self._c))
        b = other._c + (Fraction(0),) * (n - len(other._c))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-x for x in self._c])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, x in enumerate(self._c):
            if x == 0:
                continue
            for j, y in enumerate(other._c):
                out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            return self._c == _as_poly(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def derivative(self):
        return Polynomial([i * c for i, c in enumerate(self._c)][1:])

    def scale_argument(self, s):
        """Return q(x) = p(s x)."""
        s = _frac(s)
        return Polynomial([c * s**i for i, c in enumerate(self._c)])

    def __call__(self, x):
        """Horner evaluation.  Exact for Fraction/int input, float otherwise."""
        if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
            acc = Fraction(0)
            for c in reversed(self._c):
                acc = acc * x + c
            return acc
        x = np.asarray(x)
        cf = [float(c) for c in self._c] or [0.0]
        acc = np.zeros_like(x, dtype=np.result_type(x, float))
        for c in reversed(cf):
            acc = acc * x + c
        return acc if acc.ndim else acc[()]

    def to_numpy(self):
        """Float coefficients, ascending (numpy.polynomial convention)."""
        return np.array([float(c) for c in self._c] or [0.0])

    def to_text(self):
        return "[" + ", ".join(str(c) for c in self._c) + "]"

    @classmethod
    def from_text(cls, text):
        body = text.strip().strip("[]").strip()
        if not body:
            return cls()
        return cls([Fraction(t.strip()) for t in body.split(",")])

    def __repr__(self):
        return f"Polynomial({self.to_text()})"


def _as_poly(x):
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


_FACT = [1]


def _fact(n):
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def _binom_frac(a, b):
    """C(a, b) for rational a and integer b >= 0, via the falling factorial."""
    if b < 0:
        return Fraction(0)
    num = Fraction(1)
    for i in range(b):
        num *= a - i
    return num / _fact(b)
