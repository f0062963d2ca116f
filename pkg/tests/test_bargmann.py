import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from lct.bargmann import HalflineFunction, plane_bins, project, r_op, r_star, r_star_plane
from lct.special import laguerre_function_eval
from lct.wavelet import AffinePoint, GridCoverageWarning, SampledSignal, cwt, default_v_grid

N, DU = 1024, 1 / 64
FUNCS = [lambda x: np.exp(-(x - 4) ** 2), lambda x: x**2 * np.exp(-x),
         lambda x: np.where((x > 2) & (x < 10), np.exp(-4 / np.maximum((x - 2) * (10 - x), 1e-300)), 0.0)]


def roundtrip_error(fn, k, tol=1e-4, per_decade=64):
    u = np.arange(N) * DU
    xi = plane_bins(N, DU)
    f = HalflineFunction(xi, fn(xi))
    v = default_v_grid(xi[0], xi[-1], k, per_decade, tol)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridCoverageWarning)
        g = r_op(k, r_star_plane(k, f, u, v))
    return np.linalg.norm(g.values - f.values) / np.linalg.norm(f.values)


@pytest.mark.parametrize("k", [0, 1, 3])
@pytest.mark.parametrize("fn", FUNCS)
def test_roundtrip_and_refinement(fn, k):
    e1 = roundtrip_error(fn, k)
    e2 = roundtrip_error(fn, k, tol=5e-5, per_decade=128)
    assert e1 < 1e-3
    assert 0.4 < e2 / e1 < 0.6


def test_r_star_pointwise_vs_scipy():
    f = HalflineFunction(np.linspace(1, 2, 201), np.ones(201))
    z = AffinePoint(0.0, 1.0)
    got = r_star(1, f, [z])[0]
    ref = np.sqrt(2) * quad(lambda x: laguerre_function_eval(1, 2 * x) * np.sqrt(x), 1, 2)[0]
    assert abs(got - ref) < 1e-9
    assert abs(ref - (-0.7372553732)) < 1e-9


def test_r_star_plane_matches_pointwise():
    u = np.arange(256) / 16.0
    xi = plane_bins(256, 1 / 16)
    f = HalflineFunction(xi, np.exp(-(xi - 2) ** 2))
    v = np.geomspace(0.05, 5, 12)
    P = r_star_plane(2, f, u, v)
    # the plane transform is the Riemann sum over the bins
    dxi = xi[1] - xi[0]
    for i, j in [(0, 0), (17, 5), (100, 11)]:
        x = xi
        ref = np.sqrt(2) * v[j] * np.sum(f.values * laguerre_function_eval(2, 2 * x * v[j])
                                          * np.exp(2j * np.pi * x * u[i]) * np.sqrt(x)) * dxi
        assert abs(P.coefficients[i, j] - ref) < 1e-12


def test_projection_idempotent():
    rng = np.random.default_rng(5)
    sig = SampledSignal(rng.standard_normal(N) + 1j * rng.standard_normal(N), 64.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GridCoverageWarning)
        F = cwt(sig, 1)
        P1 = project(1, F)
        P2 = project(1, P1)
    err = np.linalg.norm(P2.coefficients - P1.coefficients) / np.linalg.norm(P1.coefficients)
    assert err < 1e-3


def test_r_op_level_and_edge_warning():
    u = np.arange(N) * DU
    xi = plane_bins(N, DU)
    f = HalflineFunction(xi, np.exp(-(xi - 4) ** 2))
    F = r_star_plane(0, f, u, np.geomspace(0.1, 0.3, 10))
    with pytest.raises(ValueError):
        r_op(1, F)
    with pytest.warns(GridCoverageWarning):
        r_op(0, F)


def test_halfline_function(tmp_path):
    g = np.array([1.0, 2.0, 3.0])
    f = HalflineFunction(g, [1.0, 2.0, 0.0])
    assert f(0.5) == 0 and f(1.5) == 1.5 and f(4.0) == 0
    assert abs(f.norm() - np.sqrt(0.5 * 1 + 4 + 0.5 * 0)) < 1e-15
    p = tmp_path / "f.csv"
    f.to_csv(p)
    assert np.array_equal(HalflineFunction.from_csv(p).values, f.values)
    s = HalflineFunction(np.linspace(1, 2, 9), np.linspace(1, 2, 9) ** 2, "spline")
    assert abs(s(1.37) - 1.37**2) < 1e-12
    with pytest.raises(ValueError):
        HalflineFunction([0.0, 1.0], [1, 1])
