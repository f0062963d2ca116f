"""Calderon-Toeplitz operators for vertical, horizontal and product symbols,
their integral kernels, and the Wick calculus of vertical-symbol operators.

All operators act on the L2(R+) side (HalflineFunction), where a
vertical symbol is multiplication by gamma_{a,k} and a horizontal symbol
is the kernel integral with B_k(xi, t) b_hat(xi - t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bargmann import HalflineFunction
from .quadrature import (ConvergenceError, IntegrationResult, QuadratureSpec, _finish,
                         _gauss_laguerre_pair, gauss_laguerre_rule, gauss_legendre_rule,
                         integrate_halfline, integrate_oscillatory_halfline)
from .spectral import SpectralFunction, gamma
from .special import laguerre_eval, legendre_eval
from .symbols import HorizontalSymbol, VerticalSymbol, weighted_symbol_integral
from .wavelet import kernel_on_grid, wavelet_norm_sq

__all__ = [
    "WickData", "apply_ct_vertical", "b_kernel", "b_kernel_quadrature", "apply_ct_horizontal",
    "c_kernel", "c_kernel_result", "apply_ct_product", "wick_symbol", "wick_symbol_from_gamma",
    "wick_function", "star_product", "nested_gamma_wick", "KernelZeroError",
]


class KernelZeroError(ZeroDivisionError):
    pass


@dataclass(frozen=True, eq=False)
class WickData:
    level: int
    symbol: VerticalSymbol

    @property
    def kappa(self):
        return wavelet_norm_sq(self.level)

    def spectral(self, method=None):
        return SpectralFunction(self.symbol, self.level, method)


# ---------------------------------------------------------------------------
# vertical
# ---------------------------------------------------------------------------

def apply_ct_vertical(s, f):
    """gamma_{a,k} * f on f's grid."""
    return f.with_values(np.asarray(gamma(s, f.xi_grid)) * f.values)


# ---------------------------------------------------------------------------
# horizontal: Legendre kernel
# ---------------------------------------------------------------------------

def _positive(*arrs):
    for a in arrs:
        if np.any(np.asarray(a) <= 0):
            raise ValueError("kernel arguments must be positive")


def b_kernel(k, xi, t):
    """B_k(xi, t) = 2 sqrt(t xi)/(t + xi) P_k(8 t xi/(t + xi)^2 - 1)."""
    xi = np.asarray(xi, dtype=float)
    t = np.asarray(t, dtype=float)
    _positive(xi, t)
    s = t + xi
    arg = np.clip(8 * t * xi / (s * s) - 1, -1.0, 1.0)
    out = 2 * np.sqrt(t * xi) / s * legendre_eval(k, arg, check=False)
    out = np.where(t == xi, 1.0, out)
    return out if out.ndim else out[()]


def b_kernel_quadrature(k, xi, t, spec=None):
    """sqrt(t xi) int_0^inf e^{-tau (t+xi)/2} L_k(t tau) L_k(xi tau) dtau, adaptively."""
    _positive(xi, t)
    s = t + xi
    r = integrate_halfline(
        lambda tau: np.exp(-0.5 * tau * s) * laguerre_eval(k, t * tau) * laguerre_eval(k, xi * tau),
        (spec or QuadratureSpec()).with_(scheme="tail_split", tail_cutoff=100.0 / s))
    return math.sqrt(t * xi) * r.value.real


def _t_nodes(f, resolution, order=8):
    """Composite Gauss-Legendre nodes/weights over f's grid, cells split to
    at most ``resolution`` wide."""
    g = f.xi_grid
    x, w = gauss_legendre_rule(order)
    A, B = g[:-1], g[1:]
    if resolution is not None:
        sub = np.maximum(1, np.ceil((B - A) / resolution)).astype(int)
        if sub.max() > 1:
            edges = np.concatenate([np.linspace(a, b, m + 1)[:-1] for a, b, m in zip(A, B, sub)] + [[g[-1]]])
            A, B = edges[:-1], edges[1:]
    c, h = 0.5 * (A + B), 0.5 * (B - A)
    T = (c[:, None] + h[:, None] * x[None, :]).ravel()
    W = (h[:, None] * w[None, :]).ravel()
    return T, W


def _resolution(b):
    if b.support_hint is None or b.b_hat is None:
        return None
    lo, hi = b.support_hint
    return (hi - lo) / 72.0


def _kernel_apply(kern, f, b, order=8, chunk=64):
    xi = f.xi_grid
    out = np.zeros(xi.size, dtype=complex)
    if b.b_hat is not None:
        T, W = _t_nodes(f, _resolution(b), order)
        fw = f(T) * W
        for i0 in range(0, xi.size, chunk):
            X = xi[i0:i0 + chunk, None]
            D = X - T[None, :]
            bh = b(D)
            out[i0:i0 + chunk] = (kern(X, T[None, :], bh) * bh) @ fw
    return out


def apply_ct_horizontal(b, k, f, order=8):
    """(B f)(xi) = int B_k(xi, t) b_hat(xi - t) f(t) dt (+ dirac part) on f's grid.

    The t-integral is composite Gauss-Legendre over the cells of f's grid
    (exact for the piecewise-linear interpolant times a smooth kernel);
    cells are subdivided to resolve b_hat.
    """
    out = _kernel_apply(lambda X, T, bh: b_kernel(k, np.broadcast_to(X, bh.shape),
                                                  np.broadcast_to(T, bh.shape)), f, b, order)
    if b.dirac:
        out = out + b.dirac * f.values
    return f.with_values(out)


# ---------------------------------------------------------------------------
# product symbols: C_{a,k}
# ---------------------------------------------------------------------------

def _c_poly(k, xi, t):
    s = xi + t
    a, b = 2 * xi / s, 2 * t / s
    return lambda x: laguerre_eval(k, a * x) * laguerre_eval(k, b * x)


def c_kernel_result(a, k, xi, t, spec=None):
    """C_{a,k}(xi, t) = 2 sqrt(t xi) int a(v) ell_k(2 v xi) ell_k(2 v t) dv as an IntegrationResult.

    With x = (xi + t) v this is 2 sqrt(t xi)/(xi + t) times the weighted
    symbol integral at scale xi + t.
    """
    _positive(xi, t)
    xi, t = float(xi), float(t)
    r = weighted_symbol_integral(a, xi + t, _c_poly(k, xi, t), spec)
    return r.scaled(2 * math.sqrt(t * xi) / (xi + t))


def c_kernel(a, k, xi, t, spec=None):
    r = c_kernel_result(a, k, xi, t, spec)
    if not r.converged:
        raise ConvergenceError(r)
    return r.value


def _c_kernel_constant(c, k, X, T, n=64):
    # vectorized Gauss-Laguerre; the integrand is e^-x times a degree-2k polynomial
    x, w = gauss_laguerre_rule(max(n, k + 1))
    s = X + T
    a, b = 2 * X / s, 2 * T / s
    acc = np.zeros(np.broadcast(X, T).shape)
    for xj, wj in zip(x, w):
        acc = acc + wj * laguerre_eval(k, a * xj) * laguerre_eval(k, b * xj)
    return c * 2 * np.sqrt(X * T) / s * acc


def apply_ct_product(a, b, k, f, order=8, spec=None):
    """Operator with compound symbol a(v) b(u) on the L2(R+) side.

    The u-integral of b(u) e^{-2 pi i (xi - t) u} is b_hat(xi - t), leaving
    int C_{a,k}(xi, t) b_hat(xi - t) f(t) dt; a Dirac part c delta in b_hat
    contributes c C_{a,k}(xi, xi) f(xi).
    """
    if a.kind == "constant":
        c = a.params[0]

        def kern(X, T, bh):
            return _c_kernel_constant(c, k, X, T)
    else:
        def kern(X, T, bh):
            Xb, Tb = np.broadcast_arrays(X, T)
            out = np.zeros(bh.shape, dtype=complex)
            live = np.abs(bh) > 1e-17 * np.abs(bh).max() if bh.size else bh
            for idx in zip(*np.nonzero(live)):
                out[idx] = c_kernel(a, k, Xb[idx], Tb[idx], spec)
            return out

    out = _kernel_apply(kern, f, b, order)
    if b.dirac:
        xi = f.xi_grid
        if a.kind == "constant":
            diag = _c_kernel_constant(a.params[0], k, xi, xi)
        else:
            diag = np.array([c_kernel(a, k, x, x, spec) for x in xi])
        out = out + b.dirac * diag * f.values
    return f.with_values(out)


# ---------------------------------------------------------------------------
# Wick calculus
# ---------------------------------------------------------------------------

def _gamma_callable(w):
    s = w.spectral()
    return lambda xi: np.asarray(gamma(s, xi))


def wick_symbol_from_gamma(gfn, k, v, spec=None):
    """(1/(2 kappa_k)) int_0^inf g(x/(2v)) x ell_k(x)^2 dx for a callable g.

    Equivalent to 2 kappa^-1 v^2 int g(xi) ell_k(2 v xi)^2 xi dxi after
    x = 2 v xi.  Gauss-Laguerre in x, with adaptive fallback.
    """
    if not v > 0:
        raise ValueError("v must be positive")
    spec = spec or QuadratureSpec()
    kap = wavelet_norm_sq(k)

    def P(x):
        return gfn(x / (2 * v)) * x * laguerre_eval(k, x) ** 2

    q, err, ev = _gauss_laguerre_pair(P, spec.node_count)
    r = _finish(q, err, ev, True, spec)
    if not r.converged:
        r = integrate_halfline(lambda x: np.exp(-x) * P(x), spec.with_(scheme="tail_split"),
                               breakpoints=[2 * v * 10.0**j for j in range(-3, 3)])
    return r.scaled(1 / (2 * kap))


def wick_symbol(w, v, spec=None):
    """Wick symbol of T_a^(k) at scale v: 2 kappa^-1 v^2 int gamma ell_k(2 v xi)^2 xi dxi."""
    r = wick_symbol_from_gamma(_gamma_callable(w), w.level, v, spec)
    if not r.converged:
        raise ConvergenceError(r)
    return r.value


def nested_gamma_wick(w, v, spec=None):
    """Wick symbol through the nested-gamma route.

    With b(xi) = kappa^-1/2 xi gamma_{a,k}(xi) read as a new vertical
    symbol, the Wick symbol equals kappa^-1/2 v gamma_{b,k}(v).
    """
    kap = wavelet_norm_sq(w.level)
    g = _gamma_callable(w)
    b = VerticalSymbol.custom(lambda x: kap**-0.5 * np.asarray(x) * g(np.maximum(x, 1e-300)),
                              name="nested")
    sb = SpectralFunction(b, w.level, "quadrature", spec)
    return kap**-0.5 * v * complex(gamma(sb, v))


def star_product(a, b, k, v, spec=None):
    """2 kappa^-1 v^2 int gamma_a gamma_b ell_k(2 v xi)^2 xi dxi.

    Evaluated in y = v xi by adaptive quadrature, independently of the
    Gauss-Laguerre route used by wick_symbol.  ``a`` and ``b`` may be
    SpectralFunctions (sharing their caches across calls).
    """
    if not v > 0:
        raise ValueError("v must be positive")
    spec = spec or QuadratureSpec()
    ga = a if isinstance(a, SpectralFunction) else SpectralFunction(a, k)
    gb = b if isinstance(b, SpectralFunction) else SpectralFunction(b, k)
    if ga.level != k or gb.level != k:
        raise ValueError("spectral functions must be of level k")
    kap = wavelet_norm_sq(k)

    def f(y):
        xi = np.maximum(np.asarray(y) / v, 1e-300)
        return (np.asarray(gamma(ga, xi)) * np.asarray(gamma(gb, xi))
                * np.exp(-2 * y) * laguerre_eval(k, 2 * y) ** 2 * y)

    r = integrate_halfline(f, spec.with_(scheme="tail_split", tail_cutoff=30.0),
                           breakpoints=[v * 10.0**j for j in range(-3, 2)])
    if not r.converged:
        raise ConvergenceError(r)
    return 2 / kap * r.value


def wick_function(w, zeta, eta, spec=None, kernel_threshold=1e-12):
    """Wick function <T rho_eta psi, rho_zeta psi> / <rho_eta psi, rho_zeta psi>.

    Numerator: 2tv int gamma(xi) ell_k(2 v xi) ell_k(2 t xi) e^{2 pi i (u - s) xi} xi dxi,
    the exponent matching the kernel so that the identity operator has
    Wick function 1 everywhere.
    """
    k = w.level
    u, v = zeta.u, zeta.v
    s, t = eta.u, eta.v
    K = complex(kernel_on_grid(k, zeta, np.array([s]), np.array([t]))[0])
    if abs(K) < kernel_threshold:
        raise KernelZeroError(f"|K_zeta(eta)| = {abs(K):.3g} below {kernel_threshold}")
    sig = t + v
    g = _gamma_callable(w)
    om = 2 * math.pi * (u - s) / sig
    amp = lambda x: (g(np.maximum(x / sig, 1e-300)) * x * np.exp(-x)
                     * laguerre_eval(k, 2 * v * x / sig) * laguerre_eval(k, 2 * t * x / sig))
    r = integrate_oscillatory_halfline(amp, om, spec)
    if not r.converged:
        raise ConvergenceError(r)
    return 2 * t * v / sig**2 * r.value / K
