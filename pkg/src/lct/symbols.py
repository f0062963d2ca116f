"""Vertical and horizontal symbols, and the weighted symbol integral

    I(a, s, P) = int_0^inf a(x/s) e^{-x} P(x) dx

that every spectral quantity reduces to after the substitution x = s v.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .quadrature import (IntegrationResult, QuadratureSpec, _finish,
                         _gauss_laguerre_pair, integrate_finite, integrate_halfline,
                         integrate_oscillatory_halfline, integrate_ray)

__all__ = ["VerticalSymbol", "HorizontalSymbol", "weighted_symbol_integral",
           "read_symbol_csv", "KINDS"]

KINDS = ("constant", "indicator", "sine", "osc_exp", "inv_sqrt_sin_inv", "tabulated", "custom")


def _parse_complex(text):
    t = text.strip().replace(" ", "").replace("i", "j")
    return complex(t)


@dataclass(frozen=True, eq=False)
class VerticalSymbol:
    """A symbol a(v) on v > 0.

    Build instances with the class constructors.  ``a0`` and ``a_inf`` are
    the declared limits at 0 and infinity (None when they do not exist or
    are unknown).  ``scale`` is the v-scale on which a varies, used to
    place quadrature breakpoints; ``breakpoints`` lists kinks or jumps.
    """
    kind: str
    params: tuple = ()
    func: Optional[Callable] = field(default=None, repr=False)
    a0: Optional[complex] = None
    a_inf: Optional[complex] = None
    breakpoints: tuple = ()
    scale: float = 1.0
    bound: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown symbol kind {self.kind!r}")
        if self.kind == "indicator" and not self.params[0] > 0:
            raise ValueError("indicator lambda must be positive")

    # constructors ------------------------------------------------------
    @classmethod
    def constant(cls, c):
        c = complex(c)
        return cls("constant", (c,), a0=c, a_inf=c, bound=abs(c), name=f"constant:{_fmt(c)}")

    @classmethod
    def indicator(cls, lam):
        lam = float(lam)
        if not lam > 0:
            raise ValueError("indicator lambda must be positive")
        return cls("indicator", (lam,), a0=1.0, a_inf=0.0, breakpoints=(lam,), scale=lam,
                   bound=1.0, name=f"indicator:{lam:g}")

    @classmethod
    def sine(cls):
        return cls("sine", a0=0.0, bound=1.0, name="sine")

    @classmethod
    def osc_exp(cls):
        return cls("osc_exp", a0=1.0, bound=1.0, name="osc_exp")

    @classmethod
    def inv_sqrt_sin_inv(cls):
        return cls("inv_sqrt_sin_inv", a_inf=0.0, name="inv_sqrt_sin_inv")

    @classmethod
    def tabulated(cls, v, values, a0=None, a_inf=None, name="tabulated"):
        v = np.asarray(v, dtype=float)
        vals = np.asarray(values, dtype=complex)
        if v.ndim != 1 or v.size < 2 or v.shape != vals.shape:
            raise ValueError("tabulated symbol needs matching 1-d grid and values (>= 2 points)")
        if np.any(v <= 0) or np.any(np.diff(v) <= 0):
            raise ValueError("tabulated grid must be strictly increasing and positive")
        lo = complex(vals[0]) if a0 is None else complex(a0)
        hi = complex(vals[-1]) if a_inf is None else complex(a_inf)
        v.setflags(write=False)
        vals.setflags(write=False)
        return cls("tabulated", (v, vals, lo, hi), a0=lo, a_inf=hi,
                   breakpoints=tuple(v.tolist()), scale=float(np.sqrt(v[0] * v[-1])),
                   bound=float(max(np.abs(vals).max(), abs(lo), abs(hi))), name=name)

    @classmethod
    def custom(cls, func, a0=None, a_inf=None, breakpoints=(), scale=1.0, bound=None, name="custom"):
        return cls("custom", (), func=func, a0=a0, a_inf=a_inf, breakpoints=tuple(breakpoints),
                   scale=float(scale), bound=bound, name=name)

    @classmethod
    def parse(cls, text):
        """Parse ``kind[:param[,param]]``, e.g. ``indicator:0.5``, ``constant:1+0i``."""
        kind, _, arg = text.strip().partition(":")
        kind = kind.strip().lower()
        args = [a for a in arg.split(",")] if arg else []
        try:
            if kind == "constant":
                return cls.constant(_parse_complex(args[0]) if args else 1.0)
            if kind == "indicator":
                return cls.indicator(float(args[0]) if args else 1.0)
            if kind in ("sine", "osc_exp", "inv_sqrt_sin_inv"):
                if args:
                    raise ValueError(f"{kind} takes no parameters")
                return getattr(cls, kind)()
            if kind == "tabulated":
                if not args:
                    raise ValueError("tabulated needs a CSV path")
                return read_symbol_csv(arg)
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad symbol spec {text!r}: {exc}") from None
        raise ValueError(f"bad symbol spec {text!r}: unknown kind {kind!r}")

    # evaluation --------------------------------------------------------
    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        k = self.kind
        if k == "constant":
            out = np.full(v.shape, self.params[0])
        elif k == "indicator":
            out = np.where(v <= self.params[0], 1.0, 0.0)
        elif k == "sine":
            out = np.sin(v)
        elif k == "osc_exp":
            out = np.exp(2j * v)
        elif k == "inv_sqrt_sin_inv":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.where(v > 0, np.sin(1.0 / v) / np.sqrt(v), np.nan)
        elif k == "tabulated":
            grid, vals, lo, hi = self.params
            re = np.interp(v, grid, vals.real, left=lo.real, right=hi.real)
            im = np.interp(v, grid, vals.imag, left=lo.imag, right=hi.imag)
            out = re + 1j * im
        else:
            out = np.asarray(self.func(v))
            if out.shape != v.shape:
                out = np.broadcast_to(out, v.shape)
        return out if np.ndim(out) else out[()]

    def exp_terms(self):
        """(c_j, w_j) with a(v) = sum c_j e^{i w_j v}, or None."""
        if self.kind == "constant":
            return [(self.params[0], 0.0)]
        if self.kind == "sine":
            return [(-0.5j, 1.0), (0.5j, -1.0)]
        if self.kind == "osc_exp":
            return [(1.0, 2.0)]
        return None

    def is_real(self):
        if self.kind == "constant":
            return self.params[0].imag == 0
        if self.kind == "tabulated":
            return bool(np.all(self.params[1].imag == 0))
        if self.kind == "custom":
            return False
        return self.kind != "osc_exp"

    def __repr__(self):
        return f"VerticalSymbol({self.name or self.kind})"


def _fmt(c):
    c = complex(c)
    return f"{c.real:g}{c.imag:+g}i"


def read_symbol_csv(path, a0=None, a_inf=None):
    """Tabulated symbol from CSV with header ``v,re,im``."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(rows[0]) < {"v", "re"}:
        raise ValueError(f"{path}: expected header v,re,im")
    v = [float(r["v"]) for r in rows]
    vals = [complex(float(r["re"]), float(r.get("im") or 0.0)) for r in rows]
    return VerticalSymbol.tabulated(v, vals, a0=a0, a_inf=a_inf, name=f"tabulated:{path}")


@dataclass(frozen=True, eq=False)
class HorizontalSymbol:
    """A symbol b(u) given through its Fourier transform.

    ``b_hat`` is evaluated at differences xi - t.  ``dirac`` is the weight
    of a point mass at 0 in b_hat (b = const has b_hat = const * delta).
    ``support_hint`` is an optional (lo, hi) band outside which b_hat is
    negligible; its width also sets the t-resolution used by the kernel
    integrals.
    """
    b_hat: Optional[Callable] = None
    dirac: complex = 0.0
    support_hint: Optional[tuple] = None
    name: str = ""

    @classmethod
    def constant(cls, c=1.0):
        return cls(None, dirac=complex(c), name=f"constant:{_fmt(c)}")

    @classmethod
    def gaussian(cls, width=1.0, amplitude=1.0):
        """b_hat(x) = amplitude * exp(-x^2 / (2 width^2))."""
        w = float(width)

        def bh(x):
            return amplitude * np.exp(-0.5 * (np.asarray(x) / w) ** 2)
        return cls(bh, support_hint=(-9 * w, 9 * w), name=f"gaussian:{w:g}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.b_hat is None:
            return np.zeros(x.shape, dtype=complex)
        out = np.asarray(self.b_hat(x))
        return np.broadcast_to(out, x.shape) if out.shape != x.shape else out


# -------------------------------------------------------------------------
# weighted symbol integral
# -------------------------------------------------------------------------

def weighted_symbol_integral(sym, s, P, spec=None):
    """int_0^inf a(x/s) e^{-x} P(x) dx for s > 0.

    ``P`` is a polynomial-like callable; for the oscillatory kinds it is
    evaluated at complex arguments.  The routing per symbol kind:

    * constant: Gauss-Laguerre (exact for polynomial P of degree < 2n);
    * indicator: finite integral on the exact support [0, lambda s];
    * sine, osc_exp: exponential-sum split, each term an oscillatory
      half-line integral with frequency w_j / s;
    * inv_sqrt_sin_inv: the substitution w = s/x, which turns sin(1/v)
      into sin(w) and the weight into e^{-s/w};
    * tabulated, custom: Gauss-Laguerre when a(x/s) is slowly varying on
      the node range and the estimate settles, else adaptive quadrature
      with breakpoints at the symbol's kinks and scale.
    """
    spec = spec or QuadratureSpec()
    s = float(s)
    if not s > 0:
        raise ValueError("scale must be positive")
    k = sym.kind
    n = spec.node_count

    if k == "constant":
        q, err, ev = _gauss_laguerre_pair(P, n)
        return _finish(sym.params[0] * q, abs(sym.params[0]) * err, ev, True, spec)

    if k == "indicator":
        return _indicator_integral(sym.params[0] * s, P, spec)

    terms = sym.exp_terms()
    if terms is not None:
        total = IntegrationResult(0j, 0.0, 0, True)
        for c, w in terms:
            r = integrate_oscillatory_halfline(lambda x: np.exp(-x) * P(x), w / s, spec,
                                               analytic=True)
            total = total + r.scaled(c)
        return _finish(total.value, total.error_estimate, total.evaluations, total.converged, spec)

    if k == "inv_sqrt_sin_inv":
        return _inv_sqrt_integral(s, P, spec)

    # tabulated / custom
    def g(x):
        return sym(x / s) * P(x)

    feature = sym.scale * s
    if k == "custom" and not sym.breakpoints and feature >= 0.5:
        q, err, ev = _gauss_laguerre_pair(g, n)
        r = _finish(q, err, ev, True, spec)
        if r.converged:
            return r
    bps = [feature * 10.0**j for j in range(-4, 5)]
    bps += [b * s for b in sym.breakpoints]
    T = spec.tail_cutoff
    bps = sorted(b for b in bps if 0 < b < 1e3 * T)
    return integrate_halfline(lambda x: np.exp(-x) * g(x), spec.with_(scheme="tail_split"),
                              breakpoints=bps)


def _indicator_integral(X, P, spec):
    """int_0^X e^{-x} P(x) dx."""
    T = spec.tail_cutoff
    f = lambda x: np.exp(-x) * P(x)
    if X <= 4 * T:
        bps = [X * 10.0**-j for j in range(1, 6)]
        return integrate_finite(f, 0.0, X, spec, breakpoints=bps)
    head = integrate_finite(f, 0.0, T, spec, breakpoints=[T * 10.0**-j for j in range(1, 6)])
    # [T, X] = [T, inf) - [X, inf), both by shifted Gauss-Laguerre
    n = spec.node_count
    q1, e1, ev1 = _gauss_laguerre_pair(lambda y: P(T + y), n)
    q2, e2, ev2 = _gauss_laguerre_pair(lambda y: P(X + y), n)
    w1, w2 = math.exp(-T), math.exp(-X) if X < 745 else 0.0
    val = head.value + w1 * q1 - w2 * q2
    err = head.error_estimate + w1 * e1 + w2 * e2
    return _finish(val, err, head.evaluations + ev1 + ev2, head.converged, spec)


def _inv_sqrt_integral(s, P, spec):
    # a(v) = v^{-1/2} sin(1/v); with w = s/x:
    #   int a(x/s) e^-x P(x) dx = s int_0^inf w^{-3/2} sin(w) e^{-s/w} P(s/w) dw
    def h(w):
        w = np.asarray(w)
        z = s / w
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            lead = np.exp(-z - 1.5 * np.log(w))
            out = lead * P(z)
        live = np.real(z) < 700
        return np.where(live, out, 0.0)

    W0 = min(max(20.0, 2.0 * s), 2000.0)
    bps = [k * math.pi for k in range(1, int(W0 / math.pi) + 1)]
    bps += [s * 10.0**j for j in range(-3, 3)]
    head = integrate_finite(lambda w: h(w) * np.sin(w), 0.0, W0, spec, breakpoints=bps)
    # beyond W0: sin w = (e^{iw} - e^{-iw}) / 2i, each piece rotated off the axis
    up = integrate_ray(lambda w: h(w) * np.exp(1j * w), W0, math.pi / 2, 1.0, spec)
    dn = integrate_ray(lambda w: h(w) * np.exp(-1j * w), W0, -math.pi / 2, 1.0, spec)
    tail = (up.value - dn.value) / 2j
    val = s * (head.value + tail)
    err = s * (head.error_estimate + 0.5 * (up.error_estimate + dn.error_estimate))
    ok = head.converged and up.converged and dn.converged
    return _finish(val, err, head.evaluations + up.evaluations + dn.evaluations, ok, spec)

