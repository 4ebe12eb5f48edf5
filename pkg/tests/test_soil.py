import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpucn.propagation import attenuation_constants
from wpucn.soil import mironov_permittivity, permittivity_override, soil_permittivity


def _complex_sqrt_reference(mv, clay, f):
    """Same dielectric model built on complex square roots instead of the modulus form."""
    eps0 = 8.8541878128e-12
    C = 100 * clay
    nd = 1.634 - 0.539e-2 * C + 0.2748e-4 * C**2
    kd = 0.03952 - 0.04038e-2 * C
    mvt = 0.02863 + 0.30673e-2 * C
    w = 2 * np.pi * f

    def water(e0, tau, sigma):
        eps = 4.9 + (e0 - 4.9) / (1 - 1j * w * tau) + 1j * sigma / (w * eps0)
        return np.sqrt(complex(eps))

    b = water(79.8 - 85.4e-2 * C + 32.7e-4 * C**2, 1.062e-11 + 3.45e-14 * C, 0.3112 + 0.467e-2 * C)
    u = water(100.0, 8.5e-12, 0.3631 + 1.217e-2 * C)
    bound, free = min(mv, mvt), max(mv - mvt, 0.0)
    m = complex(nd + (b.real - 1) * bound + (u.real - 1) * free, kd + b.imag * bound + u.imag * free)
    eps = m * m
    return eps.real, eps.imag


def test_golden_values(golden):
    for mv, ref in golden["soil_433MHz_clay38"].items():
        m = soil_permittivity(float(mv), 0.38, 433e6)
        assert m.eps_real == pytest.approx(ref["eps_real"], rel=1e-12)
        assert m.eps_imag == pytest.approx(ref["eps_imag"], rel=1e-12)
        assert m.source == "model-computed"


@pytest.mark.parametrize("mv", [0.0, 0.01, 0.05, 0.15, 0.3, 0.45, 0.6])
@pytest.mark.parametrize("f", [50e6, 433e6, 2.4e9, 20e9])
def test_matches_complex_root_form(mv, f):
    er, ei = mironov_permittivity(mv, 0.38, f)
    rr, ri = _complex_sqrt_reference(mv, 0.38, f)
    assert er == pytest.approx(rr, rel=1e-12)
    assert ei == pytest.approx(ri, rel=1e-12)


def test_dry_soil_band():
    m = soil_permittivity(0.0, 0.38, 433e6)
    assert 2.0 <= m.eps_real <= 6.0
    assert m.eps_imag < 0.1


def test_wetter_soil_is_denser():
    assert soil_permittivity(0.30, 0.38, 433e6).eps_real > soil_permittivity(0.10, 0.38, 433e6).eps_real


@given(st.floats(0.0, 0.6), st.floats(0.0, 1.0), st.floats(45e6, 26.5e9))
def test_nondecreasing_in_vwc(mv, clay, f):
    lo = soil_permittivity(mv * 0.5, clay, f)
    hi = soil_permittivity(mv, clay, f)
    assert hi.eps_real >= lo.eps_real - 1e-12 and hi.eps_imag >= lo.eps_imag - 1e-12


@pytest.mark.parametrize("f", [45e6, 433e6, 26.5e9])
def test_pure_clay_dry_soil_is_lossless_not_gainy(f):
    m = soil_permittivity(0.0, 1.0, f)
    assert m.eps_imag == 0.0 and m.eps_real >= 1.0


def test_continuous_in_vwc():
    mv = np.linspace(0.0, 0.6, 6001)
    er, ei = mironov_permittivity(mv, 0.38, 433e6)
    assert np.max(np.abs(np.diff(er))) < 0.02 and np.max(np.abs(np.diff(ei))) < 0.02


@pytest.mark.parametrize("kwargs", [dict(vwc=0.7, clay=0.3, f=433e6), dict(vwc=-0.1, clay=0.3, f=433e6),
                                    dict(vwc=0.2, clay=0.3, f=30e6), dict(vwc=0.2, clay=0.3, f=30e9),
                                    dict(vwc=0.2, clay=1.2, f=433e6)])
def test_domain_errors(kwargs):
    with pytest.raises(ValueError):
        soil_permittivity(**kwargs)


def test_override_passes_through():
    m = permittivity_override(20.0, 2.0)
    assert (m.eps_real, m.eps_imag, m.source) == (20.0, 2.0, "user-specified")
    with pytest.raises(ValueError):
        permittivity_override(0.5, 1.0)
    with pytest.raises(ValueError):
        permittivity_override(3.0, -0.1)


def test_vacuum_override_has_no_attenuation():
    alpha, beta = attenuation_constants(permittivity_override(1.0, 0.0), 433e6)
    assert alpha == 0.0 and beta > 0
