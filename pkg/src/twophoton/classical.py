"""Time-reversed pipeline: pulse -> Michelson -> SFG -> narrow bandpass -> detector.

The detected signal for optical-path difference ``z`` is

    I(z) = int |(h * [alpha E2(t)^2])(t)|^2 dt,
    E2(t) = (f(t) + f(t + z/c) exp(-i w0 z/c)) / 2,

with the bandpass applied as a spectral multiplication (exact circular
convolution on the grid). Delays are applied as spectral phase ramps so that
non-integer sample delays are exact.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, MeasurementError
from .interferogram import Interferogram, config_digest
from .pulsegen import PulseSpec, gaussian_pulse, pulse_energy
from .wavecore import (
    C,
    TIME,
    Envelope,
    SampledGrid,
    _require,
    default_grid,
    from_spectrum,
    to_spectrum,
    wavelength_to_omega,
)

log = logging.getLogger(__name__)

WHITE_LIGHT = "white-light"
SUM_FREQUENCY = "sum-frequency"
WIDE_SCAN = "wide-scan"

# envelope_scan: probes per local fringe period and the harmonics of w0/c fitted
ENVELOPE_PROBES = 8
ENVELOPE_HARMONICS = (1, 2)


class FilterShape(str, Enum):
    GAUSSIAN = "gaussian"
    RECTANGULAR = "rectangular"


@dataclass(frozen=True)
class FilterSpec:
    """Bandpass described by centre wavelength and intensity-transmission FWHM (both metres)."""

    center_wavelength: float
    fwhm_bandwidth: float
    shape: FilterShape = FilterShape.GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "center_wavelength", float(self.center_wavelength))
        object.__setattr__(self, "fwhm_bandwidth", float(self.fwhm_bandwidth))
        if not self.center_wavelength > 0:
            raise ConfigurationError("filter center_wavelength must be positive")
        if not 0 < self.fwhm_bandwidth < 0.1 * self.center_wavelength:
            raise ConfigurationError(
                "filter fwhm_bandwidth must be positive and much smaller than the centre wavelength"
            )
        object.__setattr__(self, "shape", FilterShape(self.shape))

    @property
    def center_omega(self) -> float:
        return wavelength_to_omega(self.center_wavelength)

    @property
    def bandwidth_hz(self) -> float:
        return C * self.fwhm_bandwidth / self.center_wavelength**2

    @property
    def coherence_length(self) -> float:
        """``(4 ln2 / pi) lambda^2 / dlambda``: FWHM of the fringe envelope for a Gaussian passband."""
        return 4 * np.log(2) / np.pi * self.center_wavelength**2 / self.fwhm_bandwidth

    def to_dict(self) -> dict:
        return {
            "center_wavelength": self.center_wavelength,
            "fwhm_bandwidth": self.fwhm_bandwidth,
            "shape": self.shape.value,
        }


@dataclass(frozen=True)
class ClassicalConfig:
    pulse: PulseSpec
    filter: FilterSpec
    sfg_efficiency: complex = 1.0 + 0.0j
    grid: SampledGrid = field(default_factory=default_grid)

    def __post_init__(self):
        alpha = complex(self.sfg_efficiency)
        if not (np.isfinite(alpha) and abs(alpha) > 0):
            raise ConfigurationError("sfg_efficiency must be finite and non-zero")
        object.__setattr__(self, "sfg_efficiency", alpha)
        _check_passband(self.filter, 2 * self.pulse.carrier, self.grid)

    @property
    def omega0(self) -> float:
        return self.pulse.carrier

    @property
    def max_delay(self) -> float:
        """Largest |z| (metres) accepted by the wrap-around guard."""
        return C * self.grid.span / 4

    def to_dict(self) -> dict:
        a = self.sfg_efficiency
        return {
            "pulse": self.pulse.to_dict(),
            "filter": self.filter.to_dict(),
            "sfg_efficiency": {"re": a.real, "im": a.imag},
            "grid": self.grid.to_dict(),
        }

    def digest(self) -> str:
        return config_digest(self.to_dict())


def _check_passband(filt: FilterSpec, carrier: float, grid: SampledGrid) -> None:
    nu_c = (filt.center_omega - carrier) / (2 * np.pi)
    reach = abs(nu_c) + 3 * filt.bandwidth_hz
    if reach > grid.nyquist:
        raise ConfigurationError(
            f"filter passband (centre {nu_c:.3e} Hz +- 3 FWHM) exceeds the grid band "
            f"+-{grid.nyquist:.3e} Hz"
        )


def michelson_transform(e: Envelope, z: float) -> Envelope:
    """Return ``(f(t) + f(t + z/c) exp(-i w z/c)) / 2`` for an ideal 50/50 Michelson."""
    _require(e, TIME)
    delay = z / C
    if abs(delay) > e.grid.span / 4:
        raise ConfigurationError(
            f"path difference {z:.3e} m exceeds the delay guard ({C * e.grid.span / 4:.3e} m)"
        )
    spec = to_spectrum(e)
    omega = e.carrier + 2 * np.pi * e.grid.detunings
    out = 0.5 * spec.samples * (1.0 + np.exp(-1j * omega * delay))
    return from_spectrum(spec.replace(samples=out))


def sfg_transform(e: Envelope, alpha: complex = 1.0) -> Envelope:
    """``alpha * E^2``: the envelope squares and the carrier doubles."""
    _require(e, TIME)
    return e.replace(samples=alpha * e.samples**2, carrier=2 * e.carrier)


def filter_transmission(filt: FilterSpec, carrier: float, detunings: np.ndarray) -> np.ndarray:
    """Amplitude transmission ``sqrt(T(nu))`` on the given detuning axis."""
    nu_c = (filt.center_omega - carrier) / (2 * np.pi)
    x = detunings - nu_c
    width = filt.bandwidth_hz
    if filt.shape is FilterShape.GAUSSIAN:
        return np.exp(-2 * np.log(2) * x**2 / width**2)
    return (np.abs(x) <= width / 2).astype(float)


def apply_bandpass(e: Envelope, filt: FilterSpec) -> Envelope:
    _require(e, TIME)
    _check_passband(filt, e.carrier, e.grid)
    spec = to_spectrum(e)
    amp = filter_transmission(filt, e.carrier, e.grid.detunings)
    return from_spectrum(spec.replace(samples=spec.samples * amp))


def detect_energy(e: Envelope) -> float:
    """Time-integrated intensity seen by a slow detector."""
    return pulse_energy(e)


def narrowband_coefficient(g: Envelope) -> complex:
    """``a[g] = int g(t) dt``: weight of ``g`` when it acts like a delta under a narrow filter."""
    _require(g, TIME)
    return complex(np.sum(g.samples) * g.grid.dt)


@lru_cache(maxsize=16)
def _input_pulse(spec: PulseSpec, grid: SampledGrid) -> Envelope:
    return gaussian_pulse(spec, grid)


def classical_signal_at(config: ClassicalConfig, z: float) -> float:
    f = _input_pulse(config.pulse, config.grid)
    e2 = michelson_transform(f, z)
    e3 = sfg_transform(e2, config.sfg_efficiency)
    return detect_energy(apply_bandpass(e3, config.filter))


def analytic_white_light(z, omega0: float):
    """``[(1 + cos(w0 z/c)) / 2]^2``, the squared white-light fringe (peak 1)."""
    return ((1 + np.cos(omega0 * np.asarray(z) / C)) / 2) ** 2


def analytic_sfg(z, omega0: float):
    """``(1/4) (1 + cos(2 w0 z/c)) / 2``, the sum-frequency fringe relative to the white-light peak."""
    return 0.25 * (1 + np.cos(2 * omega0 * np.asarray(z) / C)) / 2


def classify_regime(config: ClassicalConfig, zs) -> str:
    """White-light if every |z| is within 2.5 pulse coherence lengths, sum-frequency if none is."""
    zs = np.abs(np.asarray(zs, dtype=float))
    limit = 2.5 * C * config.pulse.fwhm_duration
    if zs.size == 0 or np.all(zs < limit):
        return WHITE_LIGHT
    if np.all(zs >= limit):
        return SUM_FREQUENCY
    return WIDE_SCAN


def _check_zs(config: ClassicalConfig, zs) -> np.ndarray:
    zs = np.asarray(zs, dtype=float).reshape(-1)
    if np.any(np.diff(zs) <= 0):
        raise ConfigurationError("scan positions must be strictly increasing")
    if zs.size and np.max(np.abs(zs)) > config.max_delay:
        raise ConfigurationError(
            f"scan reaches |z| = {np.max(np.abs(zs)):.3e} m, beyond the delay guard "
            f"{config.max_delay:.3e} m"
        )
    return zs


def _map(fn, items, workers):
    if workers and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _metadata(config: ClassicalConfig, regime: str, kind: str, zs: np.ndarray) -> dict:
    return {
        "pipeline": "classical",
        "kind": kind,
        "regime": regime,
        "config": config.to_dict(),
        "config_digest": config.digest(),
        "grid": config.grid.to_dict(),
        "carrier_rad_s": config.omega0,
        "scan": {
            "n_points": int(zs.size),
            "z_min_m": float(zs[0]) if zs.size else None,
            "z_max_m": float(zs[-1]) if zs.size else None,
        },
    }


def scan_classical(config: ClassicalConfig, zs, *, regime: str | None = None,
                   workers: int | None = None) -> Interferogram:
    zs = _check_zs(config, zs)
    regime = regime or classify_regime(config, zs)
    log.debug("classical scan: %d points, regime %s", zs.size, regime)
    signal = _map(lambda z: classical_signal_at(config, z), list(zs), workers)
    return Interferogram(zs, signal, _metadata(config, regime, "fine", zs))


def _trig_design(phases: np.ndarray, harmonics) -> np.ndarray:
    cols = [np.ones_like(phases)]
    for h in harmonics:
        cols += [np.cos(h * phases), np.sin(h * phases)]
    return np.stack(cols, axis=-1)


def _model_extrema(coef: np.ndarray, harmonics) -> tuple[float, float]:
    theta = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
    m = _trig_design(theta, harmonics) @ coef
    out = []
    for values in (m, -m):
        i = int(np.argmax(values))
        y0, y1, y2 = values[i - 1], values[i], values[(i + 1) % m.size]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom else 0.0
        out.append(y1 - 0.25 * (y0 - y2) * shift)
    return out[0], -out[1]


def local_fringe_extrema(samples, harmonics=ENVELOPE_HARMONICS) -> tuple[float, float]:
    """Max and min of a trigonometric fit to probes spread evenly over one carrier period."""
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    phases = 2 * np.pi * (np.arange(n) - (n - 1) / 2) / n
    coef, *_ = np.linalg.lstsq(_trig_design(phases, harmonics), samples, rcond=None)
    if not np.all(np.isfinite(coef)):
        raise MeasurementError("local fringe fit produced non-finite coefficients")
    return _model_extrema(coef, harmonics)


def envelope_scan(config: ClassicalConfig, centers, *, regime: str | None = None,
                  workers: int | None = None) -> Interferogram:
    """Trace the fringe envelope without a nanometre-step scan.

    Around each centre the signal is probed at ``ENVELOPE_PROBES`` points spread
    over one carrier period ``lambda0`` and fitted with a trigonometric
    polynomial in ``w0 z / c`` containing the fundamental and its second
    harmonic. That model is exact for both regimes: the squared white-light
    fringe has harmonics 0-2 and the sum-frequency fringe is the second
    harmonic. The signal records the local maximum of the fit; the local
    minima go to ``metadata["local_min"]``.
    """
    centers = _check_zs(config, centers)
    lam0 = 2 * np.pi * C / config.omega0
    offsets = lam0 * (np.arange(ENVELOPE_PROBES) - (ENVELOPE_PROBES - 1) / 2) / ENVELOPE_PROBES
    if centers.size:
        _check_zs(config, [centers[0] + offsets[0], centers[-1] + offsets[-1]])
    regime = regime or classify_regime(config, centers)

    def probe(z0):
        samples = [classical_signal_at(config, z0 + dz) for dz in offsets]
        try:
            return local_fringe_extrema(samples)
        except MeasurementError as exc:
            raise MeasurementError(f"envelope fit failed at z = {z0:.6e} m: {exc}") from exc

    extrema = _map(probe, list(centers), workers)
    upper = np.array([hi for hi, _ in extrema])
    lower = np.array([lo for _, lo in extrema])
    meta = _metadata(config, regime, "envelope", centers)
    meta["local_min"] = lower.tolist()
    meta["probes_per_period"] = ENVELOPE_PROBES
    return Interferogram(centers, upper, meta)
