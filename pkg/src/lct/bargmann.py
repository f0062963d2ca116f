"""Bargmann-type transforms between L2(R+) and the level-k wavelet subspace.

    (R_k* f)(u, v) = sqrt(2) v int_0^inf f(xi) ell_k(2 xi v) e^{2 pi i xi u} sqrt(xi) dxi
    (R_k F)(xi)    = sqrt(2 xi) int int F(u, v) ell_k(2 v xi) e^{-2 pi i xi u} du dv/v

R_k* f is the wavelet transform of the signal whose spectrum is f, so the
plane versions below share the CWT grids: a uniform u-grid with N points
and the frequency bins xi_m = m / (N du), m = 1 .. ceil(N/2) - 1.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .csvio import read_csv, write_csv
from .quadrature import QuadratureSpec, integrate_finite
from .special import laguerre_function_eval
from .wavelet import CWTPlane, GridCoverageWarning, _log_step

__all__ = ["HalflineFunction", "r_star", "r_star_plane", "r_op", "project", "plane_bins"]


@dataclass(frozen=True, eq=False)
class HalflineFunction:
    """Samples of f on a positive, increasing xi-grid; zero outside the grid."""
    xi_grid: np.ndarray
    values: np.ndarray
    interpolation: str = "linear"

    def __post_init__(self):
        g = np.array(self.xi_grid, dtype=float).ravel()
        v = np.array(self.values, dtype=complex).ravel()
        if g.size != v.size or g.size == 0:
            raise ValueError("xi_grid and values must be non-empty and equally long")
        if np.any(g <= 0) or np.any(np.diff(g) <= 0):
            raise ValueError("xi_grid must be strictly increasing and positive")
        if self.interpolation not in ("linear", "spline"):
            raise ValueError("interpolation must be 'linear' or 'spline'")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "xi_grid", g)
        object.__setattr__(self, "values", v)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        g, v = self.xi_grid, self.values
        inside = (xi >= g[0]) & (xi <= g[-1])
        if self.interpolation == "spline" and g.size >= 4:
            out = CubicSpline(g, v)(np.clip(xi, g[0], g[-1]))
        else:
            out = np.interp(xi, g, v.real) + 1j * np.interp(xi, g, v.imag)
        out = np.where(inside, out, 0.0)
        return out if out.ndim else out[()]

    def weights(self):
        """Trapezoid weights of the grid."""
        g = self.xi_grid
        if g.size == 1:
            return np.ones(1)
        d = np.diff(g)
        w = np.zeros(g.size)
        w[:-1] += d / 2
        w[1:] += d / 2
        return w

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2 * self.weights())))

    def with_values(self, values):
        return HalflineFunction(self.xi_grid, values, self.interpolation)

    def to_csv(self, path):
        write_csv(path, ["xi", "re", "im"], [self.xi_grid, self.values.real, self.values.imag])

    @classmethod
    def from_csv(cls, path, interpolation="linear"):
        d = read_csv(path, ["xi", "re", "im"])
        return cls(d["xi"], d["re"] + 1j * d["im"], interpolation)


def plane_bins(n, du):
    """Strictly positive FFT bins of an n-point grid with spacing du."""
    m = np.arange(1, (n + 1) // 2)
    return m / (n * du)


def r_star(k, f, points, spec=None):
    """(R_k* f)(zeta) at each AffinePoint, by quadrature over f's grid."""
    spec = spec or QuadratureSpec(abs_tol=1e-12, rel_tol=1e-10)
    g = f.xi_grid
    out = np.empty(len(points), dtype=complex)
    for i, z in enumerate(points):
        def integrand(x, z=z):
            return f(x) * laguerre_function_eval(k, 2 * x * z.v) * np.exp(2j * np.pi * x * z.u) * np.sqrt(x)
        panels = max(1, int(np.ceil(abs(z.u) * (g[-1] - g[0]) * 2)))
        r = integrate_finite(integrand, g[0], g[-1], spec, breakpoints=g[1:-1], panels=panels)
        out[i] = np.sqrt(2) * z.v * r.value
    return out


def r_star_plane(k, f, u_grid, v_grid, conjugate=False):
    """R_k* f on a full plane grid, by inverse FFT per scale.

    f is sampled at the plane's positive bins; the xi-integral becomes the
    Riemann sum over those bins.
    """
    u = np.asarray(u_grid, dtype=float)
    v = np.asarray(v_grid, dtype=float)
    n = u.size
    du = float(u[1] - u[0])
    xi = plane_bins(n, du)
    dxi = 1.0 / (n * du)
    fv = np.asarray(f(xi), dtype=complex)
    X = np.zeros((n, v.size), dtype=complex)
    m = np.arange(1, xi.size + 1)
    phase = np.exp(2j * np.pi * xi * u[0])
    kern = laguerre_function_eval(k, 2 * xi[:, None] * v[None, :])
    X[m, :] = (n * dxi * np.sqrt(2) * v[None, :] * kern
               * (fv * np.sqrt(xi) * phase)[:, None])
    W = np.fft.ifft(X, axis=0)
    if conjugate:
        raise NotImplementedError("conjugate planes are built with cwt(..., conjugate=True)")
    return CWTPlane(u, v, W, k)


def _edge_mass(F, nedge=2):
    w = F.du * F.log_step / F.v_grid
    e = (np.abs(F.coefficients) ** 2 * w[None, :]).sum(axis=0)
    tot = e.sum()
    if tot == 0:
        return 0.0
    return float((e[:nedge].sum() + e[-nedge:].sum()) / tot)


def r_op(k, F, coverage_tol=1e-3):
    """(R_k F)(xi_m) on the plane's positive bins.

    Warns with GridCoverageWarning when more than ``coverage_tol`` of the
    Haar-weighted mass sits in the two smallest or two largest scales.
    """
    if F.level != k:
        raise ValueError(f"plane is level {F.level}, asked for level {k}")
    if _edge_mass(F) > coverage_tol:
        warnings.warn("plane carries significant Haar mass at the edges of its scale grid",
                      GridCoverageWarning, stacklevel=2)
    v = F.v_grid
    h = _log_step(v)
    n = F.u_grid.size
    du = F.du
    xi = plane_bins(n, du)
    m = np.arange(1, xi.size + 1)
    C = np.fft.fft(F.coefficients, axis=0)[m, :] * du
    C *= np.exp(-2j * np.pi * xi * F.u_grid[0])[:, None]
    kern = laguerre_function_eval(k, 2 * xi[:, None] * v[None, :])
    vals = np.sqrt(2 * xi) * (C * kern).sum(axis=1) * h
    return HalflineFunction(xi, vals)


def project(k, F):
    """P = R_k* R_k on planes."""
    return r_star_plane(k, r_op(k, F), F.u_grid, F.v_grid)
