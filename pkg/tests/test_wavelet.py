import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from lct.special import laguerre_function_eval
from lct.wavelet import (AffinePoint, CWTPlane, GridCoverageWarning, LaguerreWavelet, SampledSignal,
                         admissibility_defect, cwt, default_v_grid, discrete_admissibility, icwt,
                         kernel_on_grid, log_grid, reproducing_kernel, wavelet_hat, wavelet_norm_sq,
                         wavelet_norm_sq_quadrature)


def tone(n=1024, rate=64.0):
    return SampledSignal.from_function(
        lambda t: np.exp(-((t - 8) / 2) ** 2) * np.cos(2 * np.pi * 3 * t), n, rate)


def test_affine_group():
    a, b, c = AffinePoint(1.0, 2.0), AffinePoint(-0.5, 0.3), AffinePoint(2.0, 5.0)
    ab_c = a.compose(b).compose(c)
    a_bc = a.compose(b.compose(c))
    assert abs(ab_c.u - a_bc.u) < 1e-14 and abs(ab_c.v - a_bc.v) < 1e-14
    e = a.compose(a.inverse())
    assert abs(e.u) < 1e-15 and abs(e.v - 1) < 1e-15
    assert a.haar_weight == 0.25
    with pytest.raises(ValueError):
        AffinePoint(0.0, -1.0)


def test_admissibility_and_norm():
    for k in range(9):
        assert admissibility_defect(k) < 1e-10
        assert abs(wavelet_norm_sq_quadrature(k).value - (2 * k + 1) / 2) < 1e-10
        assert wavelet_norm_sq(k) == (2 * k + 1) / 2
    # independent scipy oracle for the admissibility integral int |psi_hat(xi)|^2 dxi/xi
    for k in range(4):
        val, _ = quad(lambda x: wavelet_hat(k, x) ** 2 / x, 0, np.inf, limit=200)
        assert abs(val - 1) < 1e-9


def test_wavelet_hat():
    xi = np.array([-1.0, 0.0, 0.5, 2.0])
    h = wavelet_hat(2, xi)
    assert h[0] == 0 and h[1] == 0
    assert np.allclose(h[2:], np.sqrt(2 * xi[2:]) * laguerre_function_eval(2, 2 * xi[2:]))
    assert np.allclose(wavelet_hat(2, -xi, conjugate=True), h)
    assert LaguerreWavelet(3).norm_sq == 3.5


def test_cwt_round_trip():
    sig = tone()
    for k in (0, 1, 4):
        F = cwt(sig, k)
        rec = icwt(F, k)
        ref = sig.analytic()
        assert np.linalg.norm(rec.samples - ref.samples) / np.linalg.norm(ref.samples) < 1e-3
        # Haar isometry on the plane
        assert abs(F.haar_norm() / ref.norm() - 1) < 1e-3


def test_cwt_conjugate_family():
    sig = tone()
    F = cwt(sig, 1, conjugate=True)
    rec = icwt(F, 1)
    neg = sig.samples - sig.analytic().samples
    neg = neg - neg.mean()
    assert np.linalg.norm(rec.samples - neg) / np.linalg.norm(neg) < 1e-3


def test_cwt_level_mismatch():
    F = cwt(tone(), 1)
    with pytest.raises(ValueError):
        icwt(F, 2)


def test_coverage_warning():
    with pytest.warns(GridCoverageWarning):
        cwt(tone(), 0, v_grid=log_grid(0.1, 0.2, 16))


def test_default_grid_covers_band():
    for k in (0, 3):
        v = default_v_grid(0.5, 20.0, k)
        cov = discrete_admissibility(k, v, np.geomspace(0.5, 20, 50))
        assert np.all(cov > 1 - 3e-4) and np.all(cov < 1 + 1e-6)


def test_plane_csv_round_trip(tmp_path):
    F = cwt(tone(256, 32.0), 0, per_decade=8)
    p = tmp_path / "plane.csv"
    F.to_csv(p)
    G = CWTPlane.from_csv(p, 0)
    assert np.array_equal(G.coefficients, F.coefficients)
    assert np.array_equal(G.v_grid, F.v_grid)


def test_signal_csv_round_trip(tmp_path):
    s = tone(128, 16.0)
    p = tmp_path / "s.csv"
    s.to_csv(p)
    t = SampledSignal.from_csv(p)
    assert np.array_equal(t.samples, s.samples) and abs(t.sample_rate - 16) < 1e-9
    p.write_text("t,re,im\n0,1,0\n")
    with pytest.raises(ValueError):
        SampledSignal.from_csv(p)


def test_kernel_properties():
    for k in range(4):
        z = AffinePoint(0.4, 1.3)
        assert abs(reproducing_kernel(k, z, z) - wavelet_norm_sq(k)) < 1e-12
        e = AffinePoint(-1.1, 0.6)
        kq = reproducing_kernel(k, z, e)
        km = reproducing_kernel(k, z, e, method="moments")
        assert abs(kq - km) < 1e-12
        assert abs(kq - np.conj(reproducing_kernel(k, e, z))) < 1e-12


def test_kernel_direct_fourier_integral():
    # K = 2 t v int xi ell_k(2 t xi) ell_k(2 v xi) e^{2 pi i (u - s) xi} dxi, by scipy
    k, z, e = 2, AffinePoint(0.3, 0.8), AffinePoint(0.1, 1.7)
    f = lambda x, part: (2 * e.v * z.v * x * laguerre_function_eval(k, 2 * e.v * x)
                         * laguerre_function_eval(k, 2 * z.v * x) * np.exp(2j * np.pi * (z.u - e.u) * x)).__getattribute__(part)
    ref = complex(quad(f, 0, 80, args=("real",), limit=400)[0], quad(f, 0, 80, args=("imag",), limit=400)[0])
    assert abs(reproducing_kernel(k, z, e) - ref) < 1e-9


@given(st.floats(-3, 3), st.floats(0.1, 5), st.floats(-3, 3), st.floats(0.1, 5), st.integers(0, 4))
def test_kernel_cauchy_schwarz(u, v, s, t, k):
    z, e = AffinePoint(u, v), AffinePoint(s, t)
    K = kernel_on_grid(k, z, np.array([s]), np.array([t]))[0]
    assert abs(K) <= wavelet_norm_sq(k) * (1 + 1e-12)


def test_log_grid():
    v = log_grid(0.01, 1.0, 10)
    assert abs(v[0] - 0.01) < 1e-15 and v[-1] >= 1.0 - 1e-12 and len(v) == 21
    with pytest.raises(ValueError):
        log_grid(1.0, 0.5)
