import numpy as np

from lct.filtering import filter_signal, relative_l2
from lct.symbols import VerticalSymbol as V
from lct.wavelet import SampledSignal


def sig():
    return SampledSignal.from_function(
        lambda t: np.exp(-((t - 8) / 2) ** 2) * np.cos(2 * np.pi * 3 * t)
        + 0.5 * np.exp(-((t - 5) / 1) ** 2) * np.sin(2 * np.pi * 7 * t), 1024, 64)


def test_identity_symbol_reproduces_analytic_part():
    s = sig()
    for k in (0, 2):
        out, _ = filter_signal(s, V.constant(1), k, quiet=True)
        assert relative_l2(out, s.analytic()) < 1e-3


def test_zero_symbol():
    out, _ = filter_signal(sig(), V.constant(0), 1, quiet=True)
    assert np.max(np.abs(out.samples)) == 0


def test_small_scale_indicator_suppresses():
    s = sig()
    out, _ = filter_signal(s, V.indicator(1e-3), 1, quiet=True)
    assert out.norm() < s.analytic().norm()


def test_filter_matches_frequency_multiplier():
    # T_a acts as multiplication by gamma_{a,k}(xi) on the spectrum
    from lct.spectral import SpectralFunction, gamma
    s = sig()
    a = V.indicator(0.05)
    out, _ = filter_signal(s, a, 1, quiet=True)
    c = np.fft.fft(s.samples)
    xi = s.freqs
    mult = np.zeros(xi.size, dtype=complex)
    pos = xi > 0
    mult[pos] = gamma(SpectralFunction(a, 1), xi[pos])
    ref = np.fft.ifft(c * mult)
    assert np.linalg.norm(out.samples - ref) / np.linalg.norm(ref) < 1e-3
