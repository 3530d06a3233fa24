"""Time-forward pipeline: biphoton state -> Michelson -> windowed coincidence counting.

The pair is described by a joint spectral amplitude on an ``n x n`` detuning
grid around the degenerate frequency ``w0``:

    psi(nu1, nu2) ~ exp(-(nu1 + nu2)^2 ln2 / sigma_p^2) exp(-(nu1^2 + nu2^2) ln2 / sigma_s^2)

A narrow pump (``sigma_p << sigma_s``) pins ``nu1 + nu2`` near zero, which
gives the long two-photon coherence and the short single-photon coherence.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError, UsageError
from .interferogram import Interferogram, config_digest
from .wavecore import C, FREQUENCY, TIME, spectrum_to_time, time_to_spectrum, wavelength_to_omega

SMALL_Z = "quantum-small-z"
LARGE_Z = "quantum-large-z"

# probability that the two photons of a pair leave the final 50/50 splitter
# towards different detectors
PAIR_SPLIT = 0.5

# grid bounds checked by make_biphoton
MIN_PUMP_SAMPLES = 4.0  # dnu <= sigma_p / 4
MIN_SPAN_WIDTHS = 4.0   # n dnu >= 4 sigma_s


@dataclass(frozen=True)
class QuantumConfig:
    """Bandwidths in Hz, coincidence window in seconds (``None``: chosen per z).

    ``strict=False`` skips the narrowband-pump check, for studies where the
    frequency correlation is deliberately weakened.
    """

    pump_bandwidth: float
    single_bandwidth: float
    coincidence_window: float | None = None
    n: int = 1024
    dnu: float = 1e9
    center_wavelength: float = 782e-9
    strict: bool = True

    def __post_init__(self):
        if not self.single_bandwidth > 0 or not math.isfinite(self.single_bandwidth):
            raise ConfigurationError("single_bandwidth must be positive and finite")
        if not self.pump_bandwidth > 0:
            raise ConfigurationError("pump_bandwidth must be positive")
        if self.strict and not self.pump_bandwidth < self.single_bandwidth / 10:
            raise ConfigurationError(
                "pump_bandwidth must be below single_bandwidth / 10 (narrowband pump)"
            )
        if self.coincidence_window is not None and not self.coincidence_window > 0:
            raise ConfigurationError("coincidence_window must be positive")
        if self.n < 16 or self.n & (self.n - 1):
            raise ConfigurationError("n must be a power of two >= 16")
        if not self.dnu > 0:
            raise ConfigurationError("dnu must be positive")
        if not self.center_wavelength > 0:
            raise ConfigurationError("center_wavelength must be positive")

    @property
    def omega0(self) -> float:
        return wavelength_to_omega(self.center_wavelength)

    @property
    def dt(self) -> float:
        return 1.0 / (self.n * self.dnu)

    @property
    def max_delay(self) -> float:
        """Largest |z| allowed: a quarter of the time span."""
        return C * self.n * self.dt / 4

    @property
    def sum_frequency_fwhm(self) -> float:
        """FWHM (Hz) of the ``nu1 + nu2`` distribution of ``|psi|^2``."""
        a, b = _exponents(self)
        return 2 * math.sqrt(math.log(2) / (2 * a + b))

    @property
    def marginal_fwhm(self) -> float:
        """FWHM (Hz) of the single-photon spectrum (marginal of ``|psi|^2``)."""
        a, b = _exponents(self)
        return 2 * math.sqrt(math.log(2) * (a + b) / (2 * b * (2 * a + b)))

    def window_for(self, z: float) -> float:
        """Coincidence window used at path difference ``z``.

        Without an explicit window, pairs delayed by more than one inverse
        single-photon bandwidth get ``|z| / (2c)``; otherwise nothing is cut.
        """
        if self.coincidence_window is not None:
            return self.coincidence_window
        delay = abs(z) / C
        if delay * self.single_bandwidth > 1.0:
            return delay / 2
        return math.inf

    def to_dict(self) -> dict:
        return {
            "pump_bandwidth": self.pump_bandwidth,
            "single_bandwidth": self.single_bandwidth,
            "coincidence_window": self.coincidence_window,
            "n": self.n,
            "dnu": self.dnu,
            "center_wavelength": self.center_wavelength,
        }

    def digest(self) -> str:
        return config_digest(self.to_dict())


def _exponents(cfg: QuantumConfig) -> tuple[float, float]:
    a = 0.0 if math.isinf(cfg.pump_bandwidth) else math.log(2) / cfg.pump_bandwidth**2
    b = math.log(2) / cfg.single_bandwidth**2
    return a, b


@dataclass(frozen=True, eq=False)
class BiphotonState:
    amplitude: np.ndarray
    dnu: float
    carrier: float
    domain: str = FREQUENCY

    def __post_init__(self):
        amp = np.array(self.amplitude, dtype=np.complex128)
        if amp.ndim != 2 or amp.shape[0] != amp.shape[1]:
            raise ConfigurationError("biphoton amplitude must be a square 2-d array")
        if self.domain not in (FREQUENCY, TIME):
            raise ConfigurationError(f"unknown domain {self.domain!r}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitude", amp)

    @property
    def n(self) -> int:
        return self.amplitude.shape[0]

    @property
    def dt(self) -> float:
        return 1.0 / (self.n * self.dnu)

    @property
    def axis(self) -> np.ndarray:
        step = self.dnu if self.domain == FREQUENCY else self.dt
        return (np.arange(self.n) - self.n // 2) * step

    @property
    def norm(self) -> float:
        step = self.dnu if self.domain == FREQUENCY else self.dt
        return float(np.sum(np.abs(self.amplitude) ** 2) * step * step)

    def replace(self, amplitude, domain=None) -> "BiphotonState":
        return BiphotonState(amplitude, self.dnu, self.carrier, domain or self.domain)


def make_biphoton(cfg: QuantumConfig) -> BiphotonState:
    if cfg.dnu > cfg.pump_bandwidth / MIN_PUMP_SAMPLES:
        raise ConfigurationError(
            f"dnu = {cfg.dnu:.3e} Hz does not resolve the pump: need dnu <= pump_bandwidth/"
            f"{MIN_PUMP_SAMPLES:g} = {cfg.pump_bandwidth / MIN_PUMP_SAMPLES:.3e} Hz"
        )
    if cfg.n * cfg.dnu < MIN_SPAN_WIDTHS * cfg.single_bandwidth:
        raise ConfigurationError(
            f"n * dnu = {cfg.n * cfg.dnu:.3e} Hz does not contain the single-photon "
            f"spectrum: need >= {MIN_SPAN_WIDTHS:g} * single_bandwidth"
        )
    return _normalised_jsa(cfg.pump_bandwidth, cfg.single_bandwidth, cfg.n, cfg.dnu,
                           cfg.center_wavelength)


@lru_cache(maxsize=4)
def _normalised_jsa(sigma_p, sigma_s, n, dnu, wavelength) -> BiphotonState:
    nu = (np.arange(n) - n // 2) * dnu
    a = 0.0 if math.isinf(sigma_p) else math.log(2) / sigma_p**2
    b = math.log(2) / sigma_s**2
    s = nu[:, None] + nu[None, :]
    amp = np.exp(-a * s**2 - b * (nu[:, None] ** 2 + nu[None, :] ** 2))
    amp /= math.sqrt(np.sum(amp**2) * dnu * dnu)
    return BiphotonState(amp, dnu, wavelength_to_omega(wavelength), FREQUENCY)


def michelson_transfer(omega: np.ndarray, z: float) -> np.ndarray:
    """Single-photon amplitude transfer ``(1 + exp(i w z/c)) / 2``."""
    return 0.5 * (1.0 + np.exp(1j * omega * z / C))


def biphoton_michelson(psi: BiphotonState, z: float) -> BiphotonState:
    if psi.domain != FREQUENCY:
        raise UsageError("biphoton_michelson needs a frequency-domain state")
    t = michelson_transfer(psi.carrier + 2 * np.pi * psi.axis, z)
    return psi.replace(psi.amplitude * t[:, None] * t[None, :])


def joint_temporal(psi: BiphotonState) -> BiphotonState:
    if psi.domain != FREQUENCY:
        raise UsageError("joint_temporal needs a frequency-domain state")
    return psi.replace(spectrum_to_time(psi.amplitude, psi.dnu, axes=(0, 1)), TIME)


def joint_spectral(psi: BiphotonState) -> BiphotonState:
    """Inverse of :func:`joint_temporal`."""
    if psi.domain != TIME:
        raise UsageError("joint_spectral needs a time-domain state")
    return psi.replace(time_to_spectrum(psi.amplitude, psi.dt, axes=(0, 1)), FREQUENCY)


@lru_cache(maxsize=4)
def _time_separation(n: int, dt: float) -> np.ndarray:
    t = (np.arange(n) - n // 2) * dt
    sep = np.abs(t[:, None] - t[None, :])
    sep.flags.writeable = False
    return sep


def coincidence_probability(psi_t: BiphotonState, window: float) -> float:
    """Probability that both photons are detected with ``|t1 - t2| <= window``."""
    if psi_t.domain != TIME:
        raise UsageError("coincidence_probability needs a time-domain state")
    if not window > 0:
        raise DomainError(f"coincidence window must be positive, got {window!r}")
    density = np.abs(psi_t.amplitude) ** 2
    if window < math.inf:
        density = np.where(_time_separation(psi_t.n, psi_t.dt) <= window, density, 0.0)
    return float(np.sum(density) * psi_t.dt**2)


def quantum_signal_at(cfg: QuantumConfig, z: float) -> float:
    """Coincidence probability per pair, including the splitter in front of the detectors."""
    psi = biphoton_michelson(make_biphoton(cfg), z)
    return PAIR_SPLIT * coincidence_probability(joint_temporal(psi), cfg.window_for(z))


def analytic_p_small(z, omega0: float):
    return 0.5 * ((1 + np.cos(omega0 * np.asarray(z) / C)) / 2) ** 2


def analytic_p_large(z, omega0: float):
    return 0.125 * (1 + np.cos(2 * omega0 * np.asarray(z) / C)) / 2


def scan_quantum(cfg: QuantumConfig, zs, *, regime: str | None = None,
                 workers: int | None = None) -> Interferogram:
    zs = np.asarray(zs, dtype=float).reshape(-1)
    if np.any(np.diff(zs) <= 0):
        raise ConfigurationError("scan positions must be strictly increasing")
    if zs.size and np.max(np.abs(zs)) > cfg.max_delay:
        raise ConfigurationError(
            f"scan reaches |z| = {np.max(np.abs(zs)):.3e} m, beyond the delay guard "
            f"{cfg.max_delay:.3e} m"
        )
    make_biphoton(cfg)  # fail fast on grid violations
    if regime is None:
        windowed = [math.isfinite(cfg.window_for(z)) for z in zs]
        regime = LARGE_Z if windowed and all(windowed) else SMALL_Z
    items = list(zs)
    if workers and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            signal = list(pool.map(lambda z: quantum_signal_at(cfg, z), items))
    else:
        signal = [quantum_signal_at(cfg, z) for z in items]
    windows = [cfg.window_for(z) for z in items]
    meta = {
        "pipeline": "quantum",
        "kind": "fine",
        "regime": regime,
        "config": cfg.to_dict(),
        "config_digest": cfg.digest(),
        "grid": {"n": cfg.n, "dnu": cfg.dnu, "dt": cfg.dt},
        "carrier_rad_s": cfg.omega0,
        "coincidence_windows_s": [w if math.isfinite(w) else None for w in windows],
        "scan": {
            "n_points": int(zs.size),
            "z_min_m": float(zs[0]) if zs.size else None,
            "z_max_m": float(zs[-1]) if zs.size else None,
        },
    }
    return Interferogram(zs, signal, meta)
