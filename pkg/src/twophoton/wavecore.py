"""Sampling grids, carrier-referenced envelopes and energy-preserving transforms.

Conventions
-----------
* Everything is SI: seconds, metres, hertz, rad/s.
* A field is ``E(t) = f(t) exp(-i w_c t)``; ``f`` is the envelope.
* The spectrum of an envelope is taken against detuning ``nu`` (Hz) from the
  carrier, with ``f(t) = int F(nu) exp(-2 pi i nu t) dnu``. Positive detuning
  therefore means higher optical frequency.
* Normalisation keeps ``sum |f|^2 dt == sum |F|^2 dnu`` on every grid.
* Frequency samples are stored in increasing detuning order, time samples in
  increasing time order. Sample ``n // 2`` sits at ``t_center`` / zero detuning.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, MeasurementError, UsageError

TIME = "time"
FREQUENCY = "frequency"


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299_792_458.0


CONSTANTS = PhysicalConstants()
C = CONSTANTS.c


@dataclass(frozen=True)
class SampledGrid:
    """Uniform time lattice of ``n_samples`` points spaced ``dt`` around ``t_center``."""

    n_samples: int
    dt: float
    t_center: float = 0.0

    def __post_init__(self):
        n = self.n_samples
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise ConfigurationError(f"n_samples must be an integer, got {n!r}")
        if n < 16 or n & (n - 1):
            raise ConfigurationError(f"n_samples must be a power of two >= 16, got {n}")
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not np.isfinite(self.t_center):
            raise ConfigurationError("t_center must be finite")
        object.__setattr__(self, "n_samples", int(n))
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "t_center", float(self.t_center))

    @property
    def span(self) -> float:
        return self.n_samples * self.dt

    @property
    def dnu(self) -> float:
        return 1.0 / (self.n_samples * self.dt)

    @property
    def nyquist(self) -> float:
        """Largest representable |detuning| in Hz."""
        return 0.5 / self.dt

    @property
    def bandwidth(self) -> float:
        return 1.0 / self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t_center + (np.arange(self.n_samples) - self.n_samples // 2) * self.dt

    @property
    def detunings(self) -> np.ndarray:
        return (np.arange(self.n_samples) - self.n_samples // 2) * self.dnu

    def to_dict(self) -> dict:
        return {"n_samples": self.n_samples, "dt": self.dt, "t_center": self.t_center}


def make_grid(n_samples: int, dt: float, t_center: float = 0.0) -> SampledGrid:
    return SampledGrid(n_samples, dt, t_center)


def default_grid() -> SampledGrid:
    """2**16 samples at 2 fs: a 131 ps window with a +-250 THz band."""
    return SampledGrid(2**16, 2e-15)


@dataclass(frozen=True, eq=False)
class Envelope:
    """Complex envelope samples on ``grid`` in either the time or the frequency domain.

    ``samples`` is copied on construction and frozen, so envelopes can be shared
    between threads.
    """

    grid: SampledGrid
    samples: np.ndarray
    carrier: float
    domain: str = TIME

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.shape != (self.grid.n_samples,):
            raise ConfigurationError(
                f"expected {self.grid.n_samples} samples, got shape {samples.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ConfigurationError("envelope samples must be finite")
        if not np.isfinite(self.carrier) or self.carrier <= 0:
            raise ConfigurationError(f"carrier must be positive, got {self.carrier!r}")
        if self.domain not in (TIME, FREQUENCY):
            raise ConfigurationError(f"unknown domain {self.domain!r}")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "carrier", float(self.carrier))

    def replace(self, samples=None, carrier=None, domain=None) -> "Envelope":
        return Envelope(
            self.grid,
            self.samples if samples is None else samples,
            self.carrier if carrier is None else carrier,
            self.domain if domain is None else domain,
        )

    @property
    def coords(self) -> np.ndarray:
        return self.grid.times if self.domain == TIME else self.grid.detunings

    @property
    def energy(self) -> float:
        """Sum of |samples|^2 times the sample measure of the current domain."""
        step = self.grid.dt if self.domain == TIME else self.grid.dnu
        return float(np.sum(np.abs(self.samples) ** 2) * step)


def _require(e: Envelope, domain: str) -> None:
    if e.domain != domain:
        raise UsageError(f"expected a {domain}-domain envelope, got {e.domain}")


def time_to_spectrum(samples: np.ndarray, dt: float, axes=(-1,)) -> np.ndarray:
    """Centred transform ``F = dt * sum f exp(+2 pi i nu t)`` along ``axes``.

    Time origin is the centre sample. Works for n-d arrays (the biphoton code
    uses it on both axes).
    """
    n_total = np.prod([samples.shape[a] for a in axes])
    shifted = np.fft.ifftshift(samples, axes=axes)
    out = np.fft.ifftn(shifted, axes=axes) * (n_total * dt ** len(axes))
    return np.fft.fftshift(out, axes=axes)


def spectrum_to_time(spectrum: np.ndarray, dnu: float, axes=(-1,)) -> np.ndarray:
    """Inverse of :func:`time_to_spectrum`: ``f = dnu * sum F exp(-2 pi i nu t)``."""
    shifted = np.fft.ifftshift(spectrum, axes=axes)
    out = np.fft.fftn(shifted, axes=axes) * dnu ** len(axes)
    return np.fft.fftshift(out, axes=axes)


def to_spectrum(e: Envelope) -> Envelope:
    _require(e, TIME)
    g = e.grid
    spec = time_to_spectrum(e.samples, g.dt)
    if g.t_center:
        spec = spec * np.exp(2j * np.pi * g.detunings * g.t_center)
    return e.replace(samples=spec, domain=FREQUENCY)


def from_spectrum(e: Envelope) -> Envelope:
    _require(e, FREQUENCY)
    g = e.grid
    spec = e.samples
    if g.t_center:
        spec = spec * np.exp(-2j * np.pi * g.detunings * g.t_center)
    return e.replace(samples=spectrum_to_time(spec, g.dnu), domain=TIME)


def wavelength_to_omega(wavelength: float) -> float:
    if not wavelength > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength!r}")
    return 2.0 * np.pi * C / wavelength


def omega_to_wavelength(omega: float) -> float:
    if not omega > 0:
        raise DomainError(f"angular frequency must be positive, got {omega!r}")
    return 2.0 * np.pi * C / omega


def fwhm(values, coords) -> float:
    """Full width at half maximum of the dominant peak of ``values``.

    The half-maximum crossings on either side of the global maximum are found
    by linear interpolation between neighbouring samples. Raises
    :class:`MeasurementError` if the curve never drops below half maximum on
    one side (peak truncated by the array edge).
    """
    y = np.asarray(values, dtype=float)
    x = np.asarray(coords, dtype=float)
    if y.shape != x.shape or y.ndim != 1 or y.size < 3:
        raise MeasurementError("fwhm needs two 1-d arrays of equal length >= 3")
    i_peak = int(np.argmax(y))
    half = 0.5 * y[i_peak]
    if not half > 0:
        raise MeasurementError("fwhm needs a positive peak")

    below = np.nonzero(y[:i_peak] < half)[0]
    if below.size == 0:
        raise MeasurementError("no half-maximum crossing left of the peak")
    i = below[-1]
    x_left = x[i] + (half - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i])

    below = np.nonzero(y[i_peak + 1:] < half)[0]
    if below.size == 0:
        raise MeasurementError("no half-maximum crossing right of the peak")
    j = i_peak + 1 + below[0]
    x_right = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    return float(x_right - x_left)
