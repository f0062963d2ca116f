"""Operator functions on [0, 1]: Delta_lambda, its inverse, transfers between
indicator operators and nabla_{a,lambda}^(k), all at the spectral level.

The level-0 indicator operator with symbol chi_[0,lambda] is multiplication by
x(xi) = 1 - e^{-2 lambda xi}, which maps (0, inf) onto (0, 1).  A function h
on [0, 1] applied to that operator is multiplication by h(x(xi)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .csvio import write_csv
from .quadrature import (ConvergenceError, QuadratureSpec, _finish, _gauss_laguerre_pair,
                         integrate_halfline)
from .spectral import gamma
from .special import laguerre_eval
from .symbols import VerticalSymbol

__all__ = ["TransferMap", "delta", "delta_inverse", "transfer", "nabla", "nabla_result",
           "operator_function", "RangeError"]

X_CLAMP = 1.0 - 1e-12


class RangeError(ValueError):
    """The base spectral function left the domain of h."""


def _unit(x, name="x"):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        raise ValueError(f"{name} must lie in [0, 1]")
    return x


def _lam(lam):
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return float(lam)


def _ret(out):
    return out if np.ndim(out) else float(out)


def delta(lam, x, complement=None):
    """Delta_lambda(x) = 1 - (1 - x)^{2 lambda}.

    ``complement`` = 1 - x may be given instead of x when x is too close
    to 1 for a float to carry 1 - x.
    """
    lam = _lam(lam)
    if complement is not None:
        c = _unit(complement, "complement")
        with np.errstate(divide="ignore"):
            return _ret(np.where(c == 0, 1.0, -np.expm1(2 * lam * np.log(c))))
    x = _unit(x)
    if lam == 0.5:
        return _ret(x.copy())
    # expm1/log1p keep the relative accuracy near x = 0
    with np.errstate(divide="ignore"):
        out = -np.expm1(2 * lam * np.log1p(-x))
    return _ret(np.where(x == 1, 1.0, out))


def delta_inverse(lam, y, complement=None):
    """1 - (1 - y)^{1/(2 lambda)}; ``complement`` = 1 - y as in delta."""
    lam = _lam(lam)
    if complement is not None:
        c = _unit(complement, "complement")
        with np.errstate(divide="ignore"):
            return _ret(np.where(c == 0, 1.0, -np.expm1(np.log(c) / (2 * lam))))
    y = _unit(y, "y")
    if lam == 0.5:
        return _ret(y.copy())
    with np.errstate(divide="ignore"):
        out = -np.expm1(np.log1p(-y) / (2 * lam))
    return _ret(np.where(y == 1, 1.0, out))


def transfer(lam1, lam2, x):
    """Delta_{lam2} o Delta_{lam1}^{-1}; equals 1 - (1 - x)^{lam2/lam1}."""
    return delta(lam2, delta_inverse(lam1, x))


def nabla_result(a, lam, k, x, spec=None, complement=None):
    """nabla_{a,lambda}^(k)(x) as an IntegrationResult.

    With L = -ln(1-x)/lambda and w = v L the defining integral becomes
    int_0^inf a(w/L) e^{-w} L_k(w)^2 dw: Gauss-Laguerre first, adaptive
    half-line quadrature with the symbol's breakpoints otherwise.
    """
    lam = _lam(lam)
    spec = spec or QuadratureSpec()
    L = (-math.log(complement) if complement is not None else -math.log1p(-x)) / lam

    def P(w):
        return a(w / L) * laguerre_eval(k, w) ** 2

    q, err, ev = _gauss_laguerre_pair(P, spec.node_count)
    r = _finish(q, err, ev, True, spec)
    smooth = a.kind in ("constant", "sine") or (a.kind == "osc_exp" and L > 0.5)
    if smooth and r.converged:
        return r
    bps = sorted({b * L for b in a.breakpoints} | {a.scale * L * 10.0**j for j in range(-4, 3)})
    bps += [math.pi * L * j for j in range(1, int(min(60.0, 60 / L)))] if a.kind != "indicator" else []
    return integrate_halfline(lambda w: np.exp(-w) * P(w),
                              spec.with_(scheme="tail_split", tail_cutoff=60.0),
                              breakpoints=sorted(b for b in bps if 0 < b < 60))


def nabla(a, lam, k, x, spec=None, complement=None):
    """nabla_{a,lambda}^(k)(x) for x in [0, 1].

    x = 0 returns the declared a_inf and x = 1 the declared a0 (the
    endpoint limits); x is otherwise clamped below 1 - 1e-12.  Near x = 1
    the float x cannot resolve 1 - x; passing ``complement`` = 1 - x
    (then x is ignored) avoids both the rounding and the clamp.
    """
    if complement is not None:
        if np.ndim(complement):
            return np.array([nabla(a, lam, k, None, spec, c) for c in np.ravel(complement)]
                            ).reshape(np.shape(complement))
        c = float(_unit(complement, "complement"))
        if c in (0.0, 1.0):
            return nabla(a, lam, k, 1.0 - c, spec)
        r = nabla_result(a, lam, k, 1.0 - c, spec, complement=c)
        if not r.converged:
            raise ConvergenceError(r)
        return r.value
    if np.ndim(x):
        return np.array([nabla(a, lam, k, xi, spec) for xi in np.ravel(x)]).reshape(np.shape(x))
    x = float(_unit(x))
    if x == 0.0:
        if a.a_inf is None:
            raise ValueError("nabla at x = 0 needs the symbol's limit at infinity")
        return complex(a.a_inf)
    if x == 1.0:
        if a.a0 is None:
            raise ValueError("nabla at x = 1 needs the symbol's limit at zero")
        return complex(a.a0)
    r = nabla_result(a, lam, k, min(x, X_CLAMP), spec)
    if not r.converged:
        raise ConvergenceError(r)
    return r.value


@dataclass(frozen=True, eq=False)
class TransferMap:
    """A continuous map on [0, 1]: delta, delta_inverse, nabla or a composite.

    Composites apply their parts left to right.
    """
    kind: str
    lam: float = 0.5
    symbol: VerticalSymbol | None = None
    level: int = 0
    parts: tuple = ()

    def __post_init__(self):
        if self.kind not in ("delta", "delta_inverse", "nabla", "composite"):
            raise ValueError(f"unknown transfer map kind {self.kind!r}")
        if self.kind == "composite":
            if not self.parts:
                raise ValueError("composite map needs at least one part")
        else:
            _lam(self.lam)
        if self.kind == "nabla" and self.symbol is None:
            raise ValueError("nabla map needs a symbol")

    @classmethod
    def transfer(cls, lam1, lam2):
        return cls("composite", parts=(cls("delta_inverse", lam1), cls("delta", lam2)))

    def __call__(self, x):
        if self.kind == "delta":
            return delta(self.lam, x)
        if self.kind == "delta_inverse":
            return delta_inverse(self.lam, x)
        if self.kind == "nabla":
            return nabla(self.symbol, self.lam, self.level, x)
        for p in self.parts:
            x = p(x)
        return x

    def then(self, other):
        return TransferMap("composite", parts=(self, other))

    def to_csv(self, path, x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(self(x), dtype=complex)
        header = ["x", "value"] if not np.any(y.imag) else ["x", "value", "im"]
        cols = [x, y.real] if len(header) == 2 else [x, y.real, y.imag]
        write_csv(path, header, cols)


class _HOfGamma:
    """xi -> h(gamma_base(xi))."""

    def __init__(self, h, base, domain, tol):
        self.h, self.base, self.domain, self.tol = h, base, domain, tol

    def __call__(self, xi):
        g = np.asarray(gamma(self.base, xi))
        lo, hi = self.domain
        if np.any(np.abs(g.imag) > self.tol) or np.any(g.real < lo - self.tol) or np.any(g.real > hi + self.tol):
            raise RangeError(f"base spectral function leaves [{lo}, {hi}]")
        return self.h(np.clip(g.real, lo, hi))


def operator_function(h, base, domain=(0.0, 1.0), tol=1e-9):
    """Spectral realization of h(T): the evaluable xi -> h(gamma_base(xi))."""
    return _HOfGamma(h, base, domain, tol)
