import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from twophoton.errors import ConfigurationError, DomainError, MeasurementError, UsageError
from twophoton.wavecore import (
    C,
    FREQUENCY,
    TIME,
    Envelope,
    from_spectrum,
    fwhm,
    make_grid,
    omega_to_wavelength,
    to_spectrum,
    wavelength_to_omega,
)

# 2 pi c / 782 nm, evaluated with scipy.constants outside the package
OMEGA_782 = 2408761595024109.0


def test_c_is_exact():
    assert C == 299792458.0


def test_grid_derived_quantities():
    g = make_grid(1024, 2e-15)
    assert g.span == pytest.approx(2.048e-12, rel=1e-15)
    assert g.dnu == pytest.approx(4.8828125e11, rel=1e-15)
    assert g.nyquist == pytest.approx(2.5e14)
    assert make_grid(16, 1.0).dnu == 1 / 16
    assert g.times[g.n_samples // 2] == 0.0
    assert np.all(np.diff(g.detunings) > 0)


@pytest.mark.parametrize("n, dt", [(1000, 1e-15), (8, 1e-15), (1024, 0.0), (1024, -1e-15)])
def test_grid_rejects_bad_parameters(n, dt):
    with pytest.raises(ConfigurationError):
        make_grid(n, dt)


def test_envelope_validation():
    g = make_grid(16, 1e-15)
    with pytest.raises(ConfigurationError):
        Envelope(g, np.ones(8), 1e15)
    with pytest.raises(ConfigurationError):
        Envelope(g, np.full(16, np.nan), 1e15)
    with pytest.raises(ConfigurationError):
        Envelope(g, np.ones(16), 0.0)
    e = Envelope(g, np.ones(16), 1e15)
    with pytest.raises(ValueError):
        e.samples[0] = 2.0


def test_dc_envelope_is_a_single_bin():
    g = make_grid(64, 1e-15)
    spec = to_spectrum(Envelope(g, np.ones(64), 1e15)).samples
    centre = g.n_samples // 2
    assert abs(spec[centre]) == pytest.approx(g.span)
    assert np.max(np.abs(np.delete(spec, centre))) < 1e-12 * abs(spec[centre])
    back = from_spectrum(Envelope(g, spec, 1e15, FREQUENCY))
    np.testing.assert_allclose(back.samples, 1.0, atol=1e-12)


def test_domain_checks():
    g = make_grid(16, 1e-15)
    e = Envelope(g, np.ones(16), 1e15)
    with pytest.raises(UsageError):
        from_spectrum(e)
    with pytest.raises(UsageError):
        to_spectrum(to_spectrum(e))


def test_gaussian_spectrum_width():
    # intensity FWHM tau in time -> 2 ln2 / (pi tau) in frequency
    tau = 74.5e-15
    g = make_grid(2**14, 0.5e-15)
    f = np.exp(-2 * np.log(2) * g.times**2 / tau**2)
    spec = to_spectrum(Envelope(g, f, 1e15))
    width = fwhm(np.abs(spec.samples) ** 2, g.detunings)
    assert width == pytest.approx(5.923103e12, rel=1e-3)


def test_wavelength_conversion():
    assert wavelength_to_omega(782e-9) == pytest.approx(OMEGA_782, rel=1e-14)
    assert wavelength_to_omega(391e-9) == pytest.approx(2 * wavelength_to_omega(782e-9), rel=1e-15)
    for lam in (391e-9, 782e-9, 1.55e-6):
        assert omega_to_wavelength(wavelength_to_omega(lam)) == pytest.approx(lam, rel=1e-15)
    with pytest.raises(DomainError):
        wavelength_to_omega(0.0)
    with pytest.raises(DomainError):
        omega_to_wavelength(-1.0)


def test_fwhm_examples():
    x = np.linspace(-5, 5, 20001)
    assert fwhm(np.exp(-4 * np.log(2) * x**2 / 1.7**2), x) == pytest.approx(1.7, rel=1e-3)
    tri = np.linspace(-1, 1, 201)
    assert fwhm(1 - np.abs(tri), tri) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(MeasurementError):
        fwhm(np.linspace(0, 1, 50), np.arange(50.0))


def _complex_arrays(n):
    parts = arrays(np.float64, n, elements=st.floats(-1e3, 1e3, allow_nan=False))
    return st.tuples(parts, parts).map(lambda p: p[0] + 1j * p[1])


grids = st.builds(
    make_grid,
    st.sampled_from([16, 64, 256]),
    st.floats(1e-16, 1e-13),
    st.floats(-1e-13, 1e-13),
)


@given(grids, st.data())
def test_parseval_and_round_trip(g, data):
    f = data.draw(_complex_arrays(g.n_samples))
    e = Envelope(g, f, 1e15)
    spec = to_spectrum(e)
    energy = e.energy
    assert spec.energy == pytest.approx(energy, rel=1e-12, abs=1e-300)
    back = from_spectrum(spec)
    scale = max(np.max(np.abs(f)), 1e-300)
    assert np.max(np.abs(back.samples - e.samples)) <= 1e-12 * scale


@given(st.sampled_from([32, 128]), st.data(),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_linearity(n, data, a, b):
    g = make_grid(n, 1e-15)
    f1 = data.draw(_complex_arrays(n))
    f2 = data.draw(_complex_arrays(n))
    lhs = to_spectrum(Envelope(g, a * f1 + b * f2, 1e15)).samples
    rhs = a * to_spectrum(Envelope(g, f1, 1e15)).samples + b * to_spectrum(Envelope(g, f2, 1e15)).samples
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), 1e-300)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


@given(st.sampled_from([64, 256]), st.integers(-20, 20), st.data())
def test_shift_theorem(n, k, data):
    g = make_grid(n, 1e-15)
    f = data.draw(_complex_arrays(n))
    delayed = np.roll(f, k)  # f(t - k dt) on the periodic grid
    lhs = to_spectrum(Envelope(g, delayed, 1e15)).samples
    ramp = np.exp(2j * np.pi * g.detunings * k * g.dt)
    rhs = to_spectrum(Envelope(g, f, 1e15)).samples * ramp
    scale = max(np.max(np.abs(rhs)), 1e-300)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


def test_time_domain_tag_default():
    g = make_grid(16, 1e-15)
    assert Envelope(g, np.zeros(16), 1e15).domain == TIME
