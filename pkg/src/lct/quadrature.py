"""Integration engines for finite intervals and the half-line [0, inf).

All integrands are called with numpy arrays of abscissae and must return
arrays of the same shape (scalars are broadcast).  Values may be complex.

Three half-line schemes are offered:

``gauss_laguerre``
    sum w_i e^{x_i} f(x_i) with n nodes; the error estimate is the change
    against n/2 nodes.  Right for integrands of the form e^-x * smooth.
``adaptive_subdivision``
    the map x = c t/(1-t) onto [0, 1) followed by adaptive Gauss-Legendre.
``tail_split``
    adaptive Gauss-Legendre on [0, T] plus the tail [T, inf) by shifted
    Gauss-Laguerre, falling back to the mapped adaptive rule when the
    tail does not settle (algebraic decay).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_laguerre

__all__ = [
    "QuadratureSpec", "IntegrationResult", "IntegrationError", "ConvergenceError",
    "integrate_finite", "integrate_halfline", "integrate_oscillatory_halfline",
    "integrate_ray", "gauss_laguerre_rule", "gauss_legendre_rule", "default_tolerance",
]

SCHEMES = ("gauss_laguerre", "adaptive_subdivision", "tail_split")
_EPS = np.finfo(float).eps


def default_tolerance():
    """Default abs/rel tolerance; the LCT_TOL environment variable overrides it."""
    raw = os.environ.get("LCT_TOL", "").strip()
    if not raw:
        return 1e-12
    val = float(raw)
    if not val > 0:
        raise ValueError(f"LCT_TOL must be positive, got {raw!r}")
    return val


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "tail_split"
    node_count: int = 128
    abs_tol: float = field(default_factory=default_tolerance)
    rel_tol: float = field(default_factory=default_tolerance)
    tail_cutoff: float = 50.0
    panel_order: int = 15          # Gauss-Legendre points per adaptive panel
    max_intervals: int = 40000     # cap on simultaneously active panels

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.node_count < 2:
            raise ValueError("node_count must be >= 2")
        if not self.tail_cutoff > 0:
            raise ValueError("tail_cutoff must be positive")

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class IntegrationResult:
    value: complex
    error_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other):
        return IntegrationResult(self.value + other.value,
                                 self.error_estimate + other.error_estimate,
                                 self.evaluations + other.evaluations,
                                 self.converged and other.converged)

    def scaled(self, c):
        return IntegrationResult(self.value * c, self.error_estimate * abs(c),
                                 self.evaluations, self.converged)

    def require(self):
        """Return self, or raise ConvergenceError if not converged."""
        if not self.converged:
            raise ConvergenceError(self)
        return self


class IntegrationError(ArithmeticError):
    """The integrand produced NaN or Inf."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ConvergenceError(RuntimeError):
    def __init__(self, result):
        super().__init__(f"quadrature did not converge (value={result.value!r}, "
                         f"error estimate={result.error_estimate:.3g})")
        self.result = result


def _finish(value, err, evals, ok, spec):
    value = complex(value)
    return IntegrationResult(value, float(err), int(evals), bool(ok and err <= spec.tolerance(value)))


@lru_cache(maxsize=None)
def gauss_legendre_rule(n):
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def gauss_laguerre_rule(n):
    x, w = roots_laguerre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _call(f, x):
    y = np.asarray(f(x))
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    bad = ~np.isfinite(y)
    if bad.any():
        at = x[bad].ravel()[0]
        raise IntegrationError(f"integrand is not finite at x = {at!r}", abscissa=at)
    return y


def _gl_panels(f, A, B, order):
    x, w = gauss_legendre_rule(order)
    c = 0.5 * (A + B)
    h = 0.5 * (B - A)
    X = c[:, None] + h[:, None] * x[None, :]
    Y = _call(f, X.ravel()).reshape(X.shape)
    return (Y @ w) * h, (np.abs(Y) @ w) * np.abs(h)


def _adaptive(f, edges, spec):
    """Globally-budgeted bisection over the initial panels in ``edges``."""
    edges = np.asarray(edges, dtype=float)
    A, B = edges[:-1].copy(), edges[1:].copy()
    L = float(edges[-1] - edges[0])
    order = spec.panel_order
    whole, _ = _gl_panels(f, A, B, order)
    evals = A.size * order
    acc_val = 0.0 + 0.0j
    acc_err = 0.0
    ok = True
    for _ in range(200):
        M = 0.5 * (A + B)
        lv, la = _gl_panels(f, A, M, order)
        rv, ra = _gl_panels(f, M, B, order)
        evals += 2 * A.size * order
        ref = lv + rv
        diff = np.abs(ref - whole)
        floor = 50 * _EPS * (la + ra)
        err = np.maximum(diff, floor)
        tol = spec.tolerance(acc_val + ref.sum())
        width = B - A
        local = tol * width / L
        stuck = width <= 1e-13 * np.maximum(1.0, np.maximum(np.abs(A), np.abs(B)))
        # a panel already at its roundoff floor cannot improve by splitting
        done = (err <= local) | (diff <= floor) | stuck
        if np.any(stuck & (err > local)):
            ok = False
        acc_val += ref[done].sum()
        acc_err += err[done].sum()
        keep = ~done
        if not keep.any():
            break
        if 2 * keep.sum() > spec.max_intervals:
            acc_val += ref[keep].sum()
            acc_err += err[keep].sum()
            ok = False
            break
        A, M, B = A[keep], M[keep], B[keep]
        whole = np.concatenate([lv[keep], rv[keep]])
        A, B = np.concatenate([A, M]), np.concatenate([M, B])
    else:
        ok = False
    return acc_val, acc_err, evals, ok


def integrate_finite(f, a, b, spec=None, breakpoints=(), panels=1):
    """Integral of f over [a, b] by adaptive Gauss-Legendre bisection.

    ``breakpoints`` inside (a, b) become panel edges (put kinks and jumps
    there); ``panels`` splits [a, b] uniformly before refinement.
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return IntegrationResult(0j, 0.0, 0, True)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    edges = np.linspace(a, b, int(panels) + 1)
    bp = np.asarray(list(breakpoints), dtype=float)
    bp = bp[(bp > a) & (bp < b)]
    if bp.size:
        edges = np.unique(np.concatenate([edges, bp]))
    val, err, ev, ok = _adaptive(f, edges, spec)
    return _finish(sign * val, err, ev, ok, spec)


def _gauss_laguerre_pair(g, n):
    """sum w g(x) with n and n//2 nodes for a weight-stripped g."""
    x, w = gauss_laguerre_rule(n)
    xh, wh = gauss_laguerre_rule(max(n // 2, 1))
    y = _call(g, x)
    yh = _call(g, xh)
    q = y @ w
    qh = yh @ wh
    floor = 50 * _EPS * (np.abs(y) @ w)
    return q, max(abs(q - qh), floor), n + xh.size


def _mapped(f, lo, spec, breakpoints=()):
    # x = lo + c t/(1-t), t in [0, 1)
    c = max(spec.tail_cutoff / 5.0, 1e-300)

    def g(t):
        s = 1.0 - t
        return f(lo + c * t / s) * (c / (s * s))

    bp = [(p - lo) / (p - lo + c) for p in breakpoints if p > lo]
    edges = np.unique(np.concatenate([[0.0, 0.5, 0.9, 0.99, 1.0], bp]))
    return _adaptive(g, edges, spec)


def integrate_halfline(f, spec=None, breakpoints=()):
    """Integral of f over [0, inf) using ``spec.scheme``."""
    spec = spec or QuadratureSpec()
    if spec.scheme == "gauss_laguerre":
        q, err, ev = _gauss_laguerre_pair(lambda x: f(x) * np.exp(x), spec.node_count)
        return _finish(q, err, ev, True, spec)
    if spec.scheme == "adaptive_subdivision":
        val, err, ev, ok = _mapped(f, 0.0, spec, breakpoints)
        return _finish(val, err, ev, ok, spec)
    T = spec.tail_cutoff
    head = integrate_finite(f, 0.0, T, spec, breakpoints=breakpoints)
    tail = _tail(f, T, spec, [p for p in breakpoints if p > T])
    return _finish(head.value + tail.value, head.error_estimate + tail.error_estimate,
                   head.evaluations + tail.evaluations, head.converged and tail.converged, spec)


def _tail(f, T, spec, breakpoints=()):
    if not breakpoints:
        q, err, ev = _gauss_laguerre_pair(lambda y: f(T + y) * np.exp(y), spec.node_count)
        res = _finish(q, err, ev, True, spec)
        if res.converged or err <= 0.1 * spec.abs_tol:
            return res
    val, err2, ev2, ok = _mapped(f, T, spec, breakpoints)
    return _finish(val, err2, ev2, ok, spec)


def integrate_ray(f, x0, theta, rate, spec=None):
    """Integral of f from x0 to infinity along x0 + s e^{i theta}.

    ``rate`` is the expected exponential decay of f along the ray; the
    parametrization s = t / rate makes the decay e^-t.
    """
    spec = spec or QuadratureSpec()
    d = np.exp(1j * theta) / rate
    return integrate_halfline(lambda t: f(x0 + t * d) * d, spec)


def integrate_oscillatory_halfline(f, omega, spec=None, analytic=False, decay=1.0,
                                   max_panels=4000):
    """Integral of f(x) e^{i omega x} over [0, inf).

    [0, T] is cut into half-period panels (length pi/|omega|) before
    adaptive refinement.  When ``analytic`` is set, f must accept complex
    arguments and be analytic with decay about e^{-decay x} in the
    sector between the real axis and the steepest-descent ray; the tail
    beyond T, or the whole integral when the panel count would exceed
    ``max_panels``, is then taken along that ray.  Otherwise the tail uses
    shifted Gauss-Laguerre, or is dropped with its magnitude bound added
    to the error estimate when that does not settle.
    """
    spec = spec or QuadratureSpec()
    omega = float(omega)
    if omega == 0.0:
        return integrate_halfline(f, spec)

    def g(x):
        return f(x) * np.exp(1j * omega * x)

    T = spec.tail_cutoff
    half = math.pi / abs(omega)
    npan = math.ceil(T / half)
    theta = math.atan2(omega, decay)
    rate = math.hypot(omega, decay)
    if analytic and npan > max_panels:
        res = integrate_ray(g, 0.0, theta, rate, spec)
        return _finish(res.value, res.error_estimate, res.evaluations, res.converged, spec)
    head = integrate_finite(g, 0.0, T, spec, panels=min(npan, max_panels))
    if analytic:
        tail = integrate_ray(g, T, theta, rate, spec)
    else:
        tail = _tail(g, T, spec)
        if not tail.converged:
            bound = _tail(lambda x: np.abs(f(x)), T, spec)
            tail = IntegrationResult(0j, abs(bound.value) + bound.error_estimate,
                                     tail.evaluations + bound.evaluations, bound.converged)
    return _finish(head.value + tail.value, head.error_estimate + tail.error_estimate,
                   head.evaluations + tail.evaluations, head.converged and tail.converged, spec)
