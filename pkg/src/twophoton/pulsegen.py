"""Input pulses and their scalar descriptors."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, DomainError
from .wavecore import C, TIME, Envelope, SampledGrid, _require, wavelength_to_omega

# intensity time-bandwidth product of a transform-limited Gaussian
GAUSSIAN_TBP = 2.0 * np.log(2.0) / np.pi


class PulseShape(str, Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class PulseSpec:
    """Transform-limited pulse: centre wavelength, intensity FWHM, peak field."""

    center_wavelength: float
    fwhm_duration: float
    peak_amplitude: float = 1.0
    shape: PulseShape = PulseShape.GAUSSIAN

    def __post_init__(self):
        for name in ("center_wavelength", "fwhm_duration", "peak_amplitude"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.center_wavelength > 0:
            raise ConfigurationError("pulse center_wavelength must be positive")
        if not self.fwhm_duration > 0:
            raise ConfigurationError("pulse fwhm_duration must be positive")
        if not (np.isfinite(self.peak_amplitude) and self.peak_amplitude >= 0):
            raise ConfigurationError("pulse peak_amplitude must be finite and >= 0")
        object.__setattr__(self, "shape", PulseShape(self.shape))

    @property
    def carrier(self) -> float:
        return wavelength_to_omega(self.center_wavelength)

    @property
    def spectral_fwhm(self) -> float:
        """Intensity FWHM of the spectrum in Hz."""
        return GAUSSIAN_TBP / self.fwhm_duration

    def to_dict(self) -> dict:
        return {
            "center_wavelength": self.center_wavelength,
            "fwhm_duration": self.fwhm_duration,
            "peak_amplitude": self.peak_amplitude,
            "shape": self.shape.value,
        }


def gaussian_pulse(spec: PulseSpec, grid: SampledGrid) -> Envelope:
    """Envelope ``A exp(-2 ln2 (t - t_center)^2 / tau^2)``; ``|f|^2`` has FWHM ``tau``."""
    tau = spec.fwhm_duration
    if grid.span < 10 * tau:
        raise ConfigurationError(
            f"grid span {grid.span:.3e} s is below 10 x pulse duration ({10 * tau:.3e} s)"
        )
    if grid.bandwidth < 5 * spec.spectral_fwhm:
        raise ConfigurationError(
            f"grid bandwidth {grid.bandwidth:.3e} Hz is below 5 x pulse spectral FWHM "
            f"({5 * spec.spectral_fwhm:.3e} Hz)"
        )
    t = grid.times - grid.t_center
    samples = spec.peak_amplitude * np.exp(-2.0 * np.log(2.0) * t**2 / tau**2)
    return Envelope(grid, samples, spec.carrier, TIME)


def pulse_energy(e: Envelope) -> float:
    _require(e, TIME)
    return float(np.sum(np.abs(e.samples) ** 2) * e.grid.dt)


def coherence_length(tau: float) -> float:
    """``c * tau``."""
    if not tau > 0:
        raise DomainError(f"duration must be positive, got {tau!r}")
    return C * tau
