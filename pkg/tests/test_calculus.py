import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lct import calculus as fc
from lct.calculus import TransferMap
from lct.csvio import read_csv
from lct.spectral import SpectralFunction, gamma
from lct.symbols import VerticalSymbol as V

lams = st.floats(0.05, 20)
unit = st.floats(0, 1)


def test_delta_examples():
    assert fc.delta(0.5, 0.37) == 0.37
    assert fc.delta(1, 0.5) == 0.75
    assert fc.delta_inverse(1, 0.75) == 0.5
    for lam in (0.1, 1, 7):
        assert fc.delta(lam, 0.0) == 0 and fc.delta(lam, 1.0) == 1
        assert fc.delta_inverse(lam, 0.0) == 0 and fc.delta_inverse(lam, 1.0) == 1
    with pytest.raises(ValueError):
        fc.delta(1, 1.2)
    with pytest.raises(ValueError):
        fc.delta(-1, 0.5)


@given(lams, unit)
def test_inverse_pair(lam, x):
    assert abs(fc.delta(lam, fc.delta_inverse(lam, x)) - x) < 1e-12
    y = fc.delta(lam, x)
    if y < 1:
        # inverting amplifies the rounding of y by d(delta^-1)/dy = (1 - x) / (2 lam (1 - y))
        cond = (1 - x) / (2 * lam * (1 - y))
        assert abs(fc.delta_inverse(lam, y) - x) < 1e-12 + 4 * np.finfo(float).eps * cond
    # through the complement the roundtrip stays well conditioned
    c = (1 - x) ** (2 * lam)
    assert abs(fc.delta_inverse(lam, None, complement=c) - x) < 1e-12


@given(unit)
def test_transfer_composition(x):
    assert abs(fc.transfer(2, 3, fc.transfer(1, 2, x)) - fc.transfer(1, 3, x)) < 1e-12
    assert abs(fc.transfer(1.7, 1.7, x) - x) < 1e-15


def test_transfer_maps_indicator_spectra():
    # keep 1 - x well above rounding for every lambda used below
    xi = np.geomspace(0.01, 8, 50)
    for lam in (0.25, 1, 3):
        assert np.max(np.abs(fc.transfer(0.5, lam, -np.expm1(-xi)) + np.expm1(-2 * lam * xi))) < 1e-12
        g1 = gamma(SpectralFunction(V.indicator(0.7), 0), xi).real
        g2 = gamma(SpectralFunction(V.indicator(lam), 0), xi).real
        assert np.max(np.abs(fc.transfer(0.7, lam, g1) - g2)) < 1e-12


def test_delta_identity_family():
    xi = np.geomspace(0.01, 50, 200)
    for lam in (0.1, 0.5, 1, 2, 10):
        got = fc.delta(lam, None, complement=np.exp(-xi))
        assert np.max(np.abs(got + np.expm1(-2 * lam * xi))) < 1e-12


def test_delta_degenerate_limits():
    x = np.linspace(0.05, 0.95, 19)
    assert np.max(fc.delta(1e-6, x)) < 1e-5
    assert np.min(fc.delta(1e6, x)) > 1 - 1e-12


@given(lams)
def test_delta_monotone(lam):
    y = fc.delta(lam, np.linspace(0, 1, 200))
    assert np.all(np.diff(y) >= 0) and y[0] == 0 and y[-1] == 1


def test_nabla_examples():
    assert fc.nabla(V.indicator(0.5), 0.5, 2, 0.0) == 0
    x = np.linspace(0.01, 0.99, 15)
    assert np.max(np.abs(fc.nabla(V.indicator(0.8), 0.8, 0, x) - x)) < 1e-12
    assert abs(fc.nabla(V.sine(), 0.5, 1, 1 - math.exp(-1)) - 0.528) < 1e-10
    assert fc.nabla(V.osc_exp(), 1.0, 2, 1.0) == 1
    with pytest.raises(ValueError):
        fc.nabla(V.sine(), 1.0, 1, 0.0)          # no declared limit at infinity
    with pytest.raises(ValueError):
        fc.nabla(V.sine(), 1.0, 1, 1.5)


@pytest.mark.parametrize("sym", [V.indicator(2.0), V.sine(), V.osc_exp(),
                                 V.custom(lambda v: 1 / (1 + np.asarray(v) ** 2), a0=1, a_inf=0)])
@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_nabla_identity(sym, lam):
    xi = np.geomspace(0.01, 50, 25)
    for k in (0, 3):
        g = np.asarray(gamma(SpectralFunction(sym, k), xi))
        got = fc.nabla(sym, lam, k, None, complement=np.exp(-2 * lam * xi))
        assert np.max(np.abs(got - g)) < 1e-8


def test_nabla_clamp_near_one():
    # x within 1e-12 of 1 is evaluated at the clamp, i.e. at xi = ln(1e12)/(2 lam)
    sym, lam = V.indicator(1.0), 1.0
    got = fc.nabla(sym, lam, 2, 1 - 1e-14)
    xi = math.log(1e12) / (2 * lam)
    assert abs(got - gamma(SpectralFunction(sym, 2), xi)) < 1e-8


def test_operator_function():
    base = SpectralFunction(V.indicator(0.5), 0)
    xi = np.geomspace(0.01, 20, 30)
    ident = fc.operator_function(lambda x: x, base)
    assert np.allclose(ident(xi), gamma(base, xi).real, rtol=0, atol=0)
    h = fc.operator_function(lambda x: fc.delta(1.5, x), base)
    assert np.max(np.abs(h(xi) - gamma(SpectralFunction(V.indicator(1.5), 0), xi))) < 1e-12
    base1 = SpectralFunction(V.indicator(1.0), 0)
    nab = fc.operator_function(lambda x: fc.nabla(V.sine(), 1.0, 1, x), base1)
    xs = np.geomspace(0.05, 5, 8)
    assert np.max(np.abs(nab(xs) - gamma(SpectralFunction(V.sine(), 1), xs))) < 1e-8
    bad = fc.operator_function(lambda x: x, SpectralFunction(V.constant(2.0), 0))
    with pytest.raises(fc.RangeError):
        bad(1.0)


def test_transfer_map(tmp_path):
    m = TransferMap.transfer(1, 2)
    assert abs(m(0.5) - fc.transfer(1, 2, 0.5)) < 1e-15
    d = TransferMap("delta", 1.0).then(TransferMap("delta_inverse", 1.0))
    assert abs(d(0.3) - 0.3) < 1e-15
    p = tmp_path / "m.csv"
    m.to_csv(p, np.linspace(0, 1, 5))
    out = read_csv(p, ["x", "value"])
    assert np.allclose(out["value"], fc.transfer(1, 2, np.linspace(0, 1, 5)))
    with pytest.raises(ValueError):
        TransferMap("composite")
    with pytest.raises(ValueError):
        TransferMap("nabla", 1.0)
    with pytest.raises(ValueError):
        TransferMap("delta", 0.0)
