"""Time-scale filtering of sampled signals by a level-k vertical-symbol operator.

    signal --cwt--> plane --R_k--> L2(R+) --x gamma--> --R_k*--> plane --icwt--> signal

With a == 1 the chain reproduces the analytic (positive-frequency) part of
the signal up to the scale-grid truncation of the CWT.
"""
from __future__ import annotations

import warnings

import numpy as np

from .bargmann import r_op, r_star_plane
from .operators import apply_ct_vertical
from .spectral import SpectralFunction
from .wavelet import GridCoverageWarning, SampledSignal, cwt, icwt

__all__ = ["filter_signal", "relative_l2"]


def relative_l2(x, ref):
    x = x.samples if isinstance(x, SampledSignal) else np.asarray(x)
    ref = ref.samples if isinstance(ref, SampledSignal) else np.asarray(ref)
    d = np.linalg.norm(ref)
    return float(np.linalg.norm(x - ref) / d) if d else float(np.linalg.norm(x))


def filter_signal(signal, symbol, k, per_decade=64, tol=1e-4, spectral_method=None,
                  quiet=False):
    """Apply T_a^(k) to ``signal`` through the Bargmann-type transforms.

    Returns (filtered signal, plane of the input).
    """
    with warnings.catch_warnings():
        if quiet:
            warnings.simplefilter("ignore", GridCoverageWarning)
        F = cwt(signal, k, per_decade=per_decade, tol=tol)
        f = r_op(k, F)
    s = SpectralFunction(symbol, k, spectral_method)
    g = apply_ct_vertical(s, f)
    G = r_star_plane(k, g, F.u_grid, F.v_grid)
    out = icwt(G, k)
    return SampledSignal(out.samples, signal.sample_rate, signal.start_time), F
