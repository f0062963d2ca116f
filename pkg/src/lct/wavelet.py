"""Laguerre wavelets, the affine group, the CWT and its Calderon inverse.

Fourier convention: f_hat(xi) = int f(t) e^{-2 pi i t xi} dt.  The level-k
wavelet is defined on the Fourier side,

    psi_hat^(k)(xi) = sqrt(2 xi) ell_k(2 xi)   for xi > 0,  0 otherwise,

and the transform is (W_k f)(u, v) = int f_hat(xi) sqrt(v) psi_hat(v xi)
e^{2 pi i u xi} dxi.  The conjugate family uses the mirror xi -> -xi.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .csvio import read_csv, write_csv
from .quadrature import QuadratureSpec, integrate_halfline, integrate_oscillatory_halfline
from .special import cumulative_laguerre_sq, laguerre_eval, laguerre_function_eval
from .polynomial import Polynomial

__all__ = [
    "AffinePoint", "LaguerreWavelet", "SampledSignal", "CWTPlane", "wavelet_hat",
    "admissibility_defect", "wavelet_norm_sq", "wavelet_norm_sq_quadrature", "cwt", "icwt",
    "reproducing_kernel", "kernel_on_grid", "log_grid", "default_v_grid", "discrete_admissibility",
    "GridCoverageWarning",
]


class GridCoverageWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AffinePoint:
    """A point (u, v) of the ax+b group, v > 0."""
    u: float
    v: float

    def __post_init__(self):
        if not (np.isfinite(self.u) and np.isfinite(self.v)) or not self.v > 0:
            raise ValueError(f"need finite u and v > 0, got ({self.u}, {self.v})")

    def compose(self, other):
        """Group law (u, v) o (u', v') = (v u' + u, v v')."""
        return AffinePoint(self.v * other.u + self.u, self.v * other.v)

    def inverse(self):
        return AffinePoint(-self.u / self.v, 1.0 / self.v)

    @property
    def haar_weight(self):
        """Density of the left Haar measure dv du / v^2."""
        return self.v ** -2


@dataclass(frozen=True)
class LaguerreWavelet:
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")

    @property
    def norm_sq(self):
        return (2 * self.k + 1) / 2

    def hat(self, xi, conjugate=False):
        return wavelet_hat(self.k, xi, conjugate)


def wavelet_hat(k, xi, conjugate=False):
    xi = np.asarray(xi, dtype=float)
    x = -xi if conjugate else xi
    pos = np.where(x > 0, x, 0.0)
    out = np.where(x > 0, np.sqrt(2 * pos) * laguerre_function_eval(k, 2 * pos), 0.0)
    return out if out.ndim else out[()]


def admissibility_defect(k, spec=None):
    """|int_0^inf psi_hat(xi)^2 dxi/xi - 1| by quadrature in xi."""
    r = integrate_halfline(lambda x: 2 * laguerre_function_eval(k, 2 * x) ** 2, spec)
    return abs(r.value - 1.0)


def wavelet_norm_sq(k):
    return (2 * k + 1) / 2


def wavelet_norm_sq_quadrature(k, spec=None):
    """(1/2) int_0^inf x ell_k(x)^2 dx."""
    return integrate_halfline(lambda x: 0.5 * x * laguerre_function_eval(k, x) ** 2, spec)


# ---------------------------------------------------------------------------
# signals and planes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SampledSignal:
    samples: np.ndarray
    sample_rate: float
    start_time: float = 0.0

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex).ravel()
        if s.size == 0:
            raise ValueError("signal is empty")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self):
        return self.samples.size

    @property
    def dt(self):
        return 1.0 / self.sample_rate

    @property
    def times(self):
        return self.start_time + np.arange(self.n) * self.dt

    @property
    def freqs(self):
        return np.fft.fftfreq(self.n, self.dt)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.dt))

    def analytic(self):
        """Keep only strictly positive frequencies (the H2+ part)."""
        c = np.fft.fft(self.samples)
        c[self.freqs <= 0] = 0
        return SampledSignal(np.fft.ifft(c), self.sample_rate, self.start_time)

    def shifted(self, delta):
        """Periodic time shift by delta (band-limited interpolation)."""
        c = np.fft.fft(self.samples) * np.exp(-2j * np.pi * self.freqs * delta)
        return SampledSignal(np.fft.ifft(c), self.sample_rate, self.start_time)

    @classmethod
    def from_function(cls, f, n, sample_rate, start_time=0.0):
        t = start_time + np.arange(n) / sample_rate
        return cls(f(t), sample_rate, start_time)

    def to_csv(self, path):
        write_csv(path, ["t", "re", "im"], [self.times, self.samples.real, self.samples.imag])

    @classmethod
    def from_csv(cls, path):
        d = read_csv(path, ["t", "re", "im"])
        t = d["t"]
        if t.size == 0:
            raise ValueError(f"{path}: no samples")
        if t.size == 1:
            raise ValueError(f"{path}: need at least two samples to infer the rate")
        dt = np.diff(t)
        if np.any(dt <= 0) or np.ptp(dt) > 1e-6 * abs(dt.mean()):
            raise ValueError(f"{path}: sample times must be uniform and increasing")
        return cls(d["re"] + 1j * d["im"], 1.0 / dt.mean(), float(t[0]))


def _log_step(v):
    v = np.asarray(v, dtype=float)
    if v.size < 2:
        raise ValueError("need at least two scales")
    r = np.diff(np.log(v))
    if np.any(r <= 0) or np.ptp(r) > 1e-8 * abs(r.mean()):
        raise ValueError("v_grid must be logarithmically uniform and increasing")
    return float(r.mean())


@dataclass(frozen=True, eq=False)
class CWTPlane:
    """Coefficients F[i, j] = F(u_i, v_j) on a uniform u-grid and log v-grid."""
    u_grid: np.ndarray
    v_grid: np.ndarray
    coefficients: np.ndarray
    level: int
    conjugate: bool = False

    def __post_init__(self):
        u = np.array(self.u_grid, dtype=float)
        v = np.array(self.v_grid, dtype=float)
        c = np.array(self.coefficients, dtype=complex)
        if c.shape != (u.size, v.size):
            raise ValueError(f"coefficient shape {c.shape} != ({u.size}, {v.size})")
        if np.any(v <= 0):
            raise ValueError("all scales must be positive")
        if u.size > 1:
            du = np.diff(u)
            if np.any(du <= 0) or np.ptp(du) > 1e-6 * du.mean():
                raise ValueError("u_grid must be uniform and increasing")
        for a in (u, v, c):
            a.setflags(write=False)
        object.__setattr__(self, "u_grid", u)
        object.__setattr__(self, "v_grid", v)
        object.__setattr__(self, "coefficients", c)

    @property
    def du(self):
        return float(self.u_grid[1] - self.u_grid[0]) if self.u_grid.size > 1 else 1.0

    @property
    def log_step(self):
        return _log_step(self.v_grid)

    def haar_norm(self):
        """sqrt of sum |F|^2 du dv / v^2 with dv = v h on the log grid."""
        w = self.du * self.log_step / self.v_grid
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2 * w[None, :])))

    def with_coefficients(self, c):
        return CWTPlane(self.u_grid, self.v_grid, c, self.level, self.conjugate)

    def to_csv(self, path):
        U, V = np.meshgrid(self.u_grid, self.v_grid, indexing="ij")
        c = self.coefficients
        write_csv(path, ["u", "v", "re", "im"], [U, V, c.real, c.imag])

    @classmethod
    def from_csv(cls, path, level):
        d = read_csv(path, ["u", "v", "re", "im"])
        u = np.unique(d["u"])
        v = np.unique(d["v"])
        if u.size * v.size != d["u"].size:
            raise ValueError(f"{path}: rows do not form a full u x v grid")
        iu = np.searchsorted(u, d["u"])
        iv = np.searchsorted(v, d["v"])
        c = np.zeros((u.size, v.size), dtype=complex)
        c[iu, iv] = d["re"] + 1j * d["im"]
        return cls(u, v, c, level)


# ---------------------------------------------------------------------------
# scale grids
# ---------------------------------------------------------------------------

def log_grid(v_min, v_max, per_decade=64):
    """v_min * 10^(j/per_decade), j = 0.. until v_max is reached."""
    if not (0 < v_min < v_max):
        raise ValueError("need 0 < v_min < v_max")
    n = int(math.ceil(math.log10(v_max / v_min) * per_decade - 1e-9)) + 1
    return v_min * 10.0 ** (np.arange(n) / per_decade)


def _tail_point(k, tol):
    # smallest x with int_x^inf ell_k^2 <= tol
    lo, hi = 0.0, 1.0
    while 1 - cumulative_laguerre_sq(k, hi) > tol:
        hi *= 2
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if 1 - cumulative_laguerre_sq(k, mid) > tol:
            lo = mid
        else:
            hi = mid
    return hi


def default_v_grid(xi_lo, xi_hi, k, per_decade=64, tol=1e-4):
    """Log scale grid whose discrete admissibility sum misses at most about
    ``tol`` of each frequency in [xi_lo, xi_hi].

    Small scales lose int_0^{2 v_min xi} ell_k^2 ~ 2 v_min xi, large scales
    lose int_{2 v_max xi}^inf ell_k^2.
    """
    if not (0 < xi_lo <= xi_hi):
        raise ValueError("need 0 < xi_lo <= xi_hi")
    v_min = tol / (2 * xi_hi)
    v_max = _tail_point(k, tol) / (2 * xi_lo)
    return log_grid(v_min, max(v_max, 10 * v_min), per_decade)


def _signal_band(c, xi, rel=1e-12):
    pos = xi > 0
    p = np.abs(c) ** 2
    if not pos.any() or p[pos].max() == 0:
        return None
    live = pos & (p > rel * p[pos].max())
    return float(xi[live].min()), float(xi[live].max())


def discrete_admissibility(k, v_grid, xi, conjugate=False):
    """sum_j psi_hat(v_j xi)^2 h, the discrete stand-in for the admissibility integral."""
    v = np.asarray(v_grid, dtype=float)
    h = _log_step(v)
    xi = np.asarray(xi, dtype=float)
    return (wavelet_hat(k, v[None, :] * xi.reshape(-1, 1), conjugate) ** 2).sum(axis=1).reshape(xi.shape) * h


def _check_coverage(k, v, xi, c, conjugate, tol=1e-3):
    band = _signal_band(c, -xi if conjugate else xi)
    if band is None:
        return
    mask = (np.abs(c) ** 2 > 1e-12 * (np.abs(c) ** 2).max()) & ((-xi if conjugate else xi) > 0)
    cov = discrete_admissibility(k, v, xi[mask], conjugate)
    if cov.min() < 1 - tol:
        warnings.warn(f"scale grid covers only {cov.min():.6f} of the admissibility integral "
                      f"inside the signal band", GridCoverageWarning, stacklevel=3)
    x = np.abs(xi[mask])
    reach = wavelet_hat(k, np.outer(v, x)) ** 2
    dead = reach.max(axis=1) < 1e-16
    if dead.any():
        warnings.warn(f"{int(dead.sum())} scales lie outside the resolvable band of the signal",
                      GridCoverageWarning, stacklevel=3)


def cwt(signal, k, v_grid=None, conjugate=False, per_decade=64, tol=1e-4):
    """Continuous wavelet transform by per-scale multiplication in frequency.

    Only strictly positive frequencies contribute (negative ones for the
    conjugate family).  Without ``v_grid`` a grid is built from the
    signal band with ``default_v_grid``.
    """
    if not isinstance(signal, SampledSignal):
        raise TypeError("signal must be a SampledSignal")
    c = np.fft.fft(signal.samples)
    xi = signal.freqs
    if v_grid is None:
        band = _signal_band(c, -xi if conjugate else xi)
        if band is None:
            band = (1.0 / (signal.n * signal.dt), 0.5 * signal.sample_rate)
        v_grid = default_v_grid(band[0], band[1], k, per_decade, tol)
    v = np.asarray(v_grid, dtype=float)
    if np.any(v <= 0):
        raise ValueError("all scales must be positive")
    if v.size > 1:
        _check_coverage(k, v, xi, c, conjugate)
    filt = np.sqrt(v)[None, :] * wavelet_hat(k, xi[:, None] * v[None, :], conjugate)
    W = np.fft.ifft(c[:, None] * filt, axis=0)
    return CWTPlane(signal.times, v, W, k, conjugate)


def icwt(plane, k, conjugate=None):
    """Calderon inverse: f_hat = sum_j (W_j)^ sqrt(v_j) psi_hat(v_j xi) h / v_j."""
    if plane.level != k:
        raise ValueError(f"plane is level {plane.level}, asked to invert at level {k}")
    conj = plane.conjugate if conjugate is None else conjugate
    v = plane.v_grid
    h = plane.log_step
    n = plane.u_grid.size
    du = plane.du
    xi = np.fft.fftfreq(n, du)
    filt = (h / np.sqrt(v))[None, :] * wavelet_hat(k, xi[:, None] * v[None, :], conj)
    C = np.fft.fft(plane.coefficients, axis=0)
    rec = np.fft.ifft((C * filt).sum(axis=1))
    return SampledSignal(rec, 1.0 / du, float(plane.u_grid[0]))


# ---------------------------------------------------------------------------
# reproducing kernel
# ---------------------------------------------------------------------------

def reproducing_kernel(k, zeta, eta, method="quadrature", spec=None):
    """K_zeta(eta) = <rho_eta psi, rho_zeta psi> for zeta = (u, v), eta = (s, t).

    On the Fourier side this is 2 t v int_0^inf xi ell_k(2 t xi) ell_k(2 v xi)
    e^{2 pi i (u - s) xi} dxi, so K_zeta(zeta) = kappa_k.  With x = (t+v) xi
    it becomes 2tv/(t+v)^2 int x e^{-x} L_k(2tx/(t+v)) L_k(2vx/(t+v)) e^{i w x} dx,
    w = 2 pi (u - s)/(t + v).  ``method`` "quadrature" integrates that
    oscillatory integral; "moments" expands the polynomial and uses
    int x^n e^{-(1 - i w) x} dx = n!/(1 - i w)^(n+1).
    """
    u, v = zeta.u, zeta.v
    s, t = eta.u, eta.v
    sig = t + v
    pre = 2 * t * v / sig**2
    a, b = 2 * t / sig, 2 * v / sig
    w = 2 * math.pi * (u - s) / sig
    if method == "moments":
        return complex(kernel_on_grid(k, zeta, np.array([s]), np.array([t]))[0])
    if method != "quadrature":
        raise ValueError("method must be 'quadrature' or 'moments'")
    r = integrate_oscillatory_halfline(
        lambda x: x * np.exp(-x) * laguerre_eval(k, a * x) * laguerre_eval(k, b * x),
        w, spec, analytic=True)
    return complex(pre * r.value)


def kernel_on_grid(k, zeta, s, t):
    """Vectorized moments evaluation of K_zeta(eta) for eta = (s_i, t_i)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    u, v = zeta.u, zeta.v
    sig = t + v
    z = 1 - 1j * 2 * math.pi * (u - s) / sig
    a, b = 2 * t / sig, 2 * v / sig
    L = Polynomial.laguerre(k).to_numpy()
    deg = L.size - 1
    acc = np.zeros(np.broadcast(s, t).shape, dtype=complex)
    # coefficient of x^(i+j+1) is L_i L_j a^i b^j
    for i in range(deg + 1):
        for j in range(deg + 1):
            n = i + j + 1
            acc = acc + L[i] * L[j] * a**i * b**j * (math.factorial(n) / z ** (n + 1))
    return 2 * t * v / sig**2 * acc
