"""Fringe fitting, envelope widths, peak ratios and piezo displacement calibration."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import least_squares, minimize_scalar
from scipy.signal import hilbert

from .errors import DomainError, MeasurementError
from .interferogram import Interferogram
from .wavecore import fwhm

# fit_fringe model: offset + fundamental + this many higher harmonics
FIT_HARMONICS = (1, 2)


@dataclass(frozen=True)
class FringeMetrics:
    """Result of :func:`fit_fringe`.

    ``offset`` and ``amplitude`` are the mid-level and half peak-to-peak of
    the fitted curve, so ``visibility == amplitude / offset``. For a pure
    cosine they reduce to ``C`` and ``A`` of ``C + A cos(kz + phase)``.
    ``phase`` is the phase of the fundamental.
    """

    visibility: float
    period: float
    phase: float
    offset: float
    amplitude: float
    rms_residual: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CalibrationFit:
    """Quadratic map ``z'(V) = c0 + c1 V + c2 V^2`` recovered from a fringe record."""

    c0: float
    c1: float
    c2: float
    rms_residual: float
    offset: float = 0.0
    amplitude: float = 0.0
    phase: float = 0.0

    def __call__(self, controls):
        v = np.asarray(controls, dtype=float)
        return self.c0 + self.c1 * v + self.c2 * v**2

    def to_dict(self) -> dict:
        return asdict(self)


def _design(z, k, harmonics=FIT_HARMONICS):
    cols = [np.ones_like(z)]
    for h in harmonics:
        cols += [np.cos(h * k * z), np.sin(h * k * z)]
    return np.stack(cols, axis=1)


def _linear_fit(z, s, k):
    x = _design(z, k)
    coef, *_ = np.linalg.lstsq(x, s, rcond=None)
    return coef, s - x @ coef


def _dominant_wavenumber(z, s) -> float:
    """Wavenumber of the strongest non-DC spectral peak (Hann window, parabolic refinement)."""
    n = z.size
    grid = np.linspace(z[0], z[-1], n)
    y = np.interp(grid, z, s)
    y = (y - y.mean()) * np.hanning(n)
    pad = 8 * n
    mag = np.abs(np.fft.rfft(y, pad))
    mag[0] = 0.0
    i = int(np.argmax(mag))
    if i == 0 or mag[i] == 0 or i == mag.size - 1:
        raise MeasurementError("no dominant spectral peak in the fringe signal")
    others = np.delete(mag, np.arange(max(i - 16, 0), min(i + 17, mag.size)))
    if others.size and mag[i] < 3 * np.median(others):
        raise MeasurementError("spectral peak is not dominant; signal looks like noise")
    a, b, c = np.log(mag[i - 1:i + 2] + 1e-300)
    shift = 0.5 * (a - c) / (a - 2 * b + c) if (a - 2 * b + c) else 0.0
    step = grid[1] - grid[0]
    return 2 * np.pi * (i + shift) / (pad * step)


def fit_fringe(ig: Interferogram) -> FringeMetrics:
    """Least-squares fringe fit of an interferogram.

    The wavenumber starts at the dominant spectral peak and is refined with
    the linear coefficients (offset, fundamental, second harmonic) solved in
    closed form at every trial value. The second harmonic is there so that
    the squared white-light fringe is fitted without bias.
    """
    z = np.asarray(ig.z, dtype=float)
    s = np.asarray(ig.signal, dtype=float)
    if z.size < 8:
        raise MeasurementError("fit_fringe needs at least 8 samples")
    scale = np.max(np.abs(s))
    if not scale > 0 or np.ptp(s) <= 1e-12 * scale:
        raise MeasurementError("signal is constant: no fringe to fit")
    zc = z - z[0]
    span = zc[-1]
    k0 = _dominant_wavenumber(zc, s / scale)
    bin_width = 2 * np.pi / span
    lo, hi = max(k0 - bin_width, 0.5 * k0), k0 + bin_width

    def cost(k):
        return float(np.sum(_linear_fit(zc, s / scale, k)[1] ** 2))

    res = minimize_scalar(cost, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13 * k0, "maxiter": 500})
    if not res.success or not np.isfinite(res.x):
        raise MeasurementError(f"fringe fit did not converge: {res.message}")
    k = float(res.x)
    if k * span / (2 * np.pi) < 3:
        raise MeasurementError(
            f"data cover {k * span / (2 * np.pi):.2f} fringe periods; at least 3 are needed"
        )
    coef, resid = _linear_fit(zc, s, k)
    a1, b1 = coef[1], coef[2]
    # a cos(k zc) + b sin(k zc) = A cos(k z + phase) with zc = z - z[0]
    phase = float(np.angle(a1 - 1j * b1) - k * z[0])
    phase = float((phase + np.pi) % (2 * np.pi) - np.pi)

    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    cols = [np.ones_like(theta)]
    for h in FIT_HARMONICS:
        cols += [np.cos(h * theta), np.sin(h * theta)]
    model = np.stack(cols, axis=1) @ coef
    top, bottom = _refined_max(model), -_refined_max(-model)
    offset = 0.5 * (top + bottom)
    amplitude = 0.5 * (top - bottom)
    if not offset > 0:
        raise MeasurementError("fitted fringe offset is not positive")
    return FringeMetrics(
        visibility=float(amplitude / offset),
        period=float(2 * np.pi / k),
        phase=phase,
        offset=float(offset),
        amplitude=float(amplitude),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
    )


def _refined_max(values: np.ndarray) -> float:
    i = int(np.argmax(values))
    y0, y1, y2 = values[i - 1], values[i], values[(i + 1) % values.size]
    denom = y0 - 2 * y1 + y2
    if denom == 0:
        return float(y1)
    shift = 0.5 * (y0 - y2) / denom
    return float(y1 - 0.25 * (y0 - y2) * shift)


def _parabolic_extrema(z, s, sign):
    """Interpolated local maxima (sign=+1) or minima (sign=-1) of a sampled curve."""
    y = sign * s
    idx = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    y0, y1, y2 = y[idx - 1], y[idx], y[idx + 1]
    denom = y0 - 2 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(denom != 0, 0.5 * (y0 - y2) / denom, 0.0)
    step = np.where(shift >= 0, z[np.minimum(idx + 1, z.size - 1)] - z[idx], z[idx] - z[idx - 1])
    return z[idx] + shift * step, sign * (y1 - 0.25 * (y0 - y2) * shift)


def fringe_amplitude(ig: Interferogram) -> tuple[np.ndarray, np.ndarray]:
    """Half peak-to-peak fringe amplitude versus z.

    Envelope scans carry their local minima in the metadata. For dense scans
    the local maxima and minima are located with 3-point parabolic
    interpolation and the minima are interpolated onto the maxima positions.
    """
    z = np.asarray(ig.z, dtype=float)
    s = np.asarray(ig.signal, dtype=float)
    lower = ig.metadata.get("local_min")
    if lower is not None:
        return z, 0.5 * (s - np.asarray(lower, dtype=float))
    z_max, s_max = _parabolic_extrema(z, s, +1)
    z_min, s_min = _parabolic_extrema(z, s, -1)
    if z_max.size < 3 or z_min.size < 2:
        raise MeasurementError("too few fringes to trace an envelope")
    return z_max, 0.5 * (s_max - np.interp(z_max, z_min, s_min))


def envelope_fwhm(ig: Interferogram, *, mirror: bool = False) -> float:
    """FWHM of the fringe-amplitude envelope.

    ``mirror=True`` reflects a one-sided scan (all z > 0) about z = 0 before
    measuring, which is valid because I(z) = I(-z) for an ideal Michelson.
    """
    z, amp = fringe_amplitude(ig)
    if mirror:
        if np.any(z <= 0):
            raise MeasurementError("mirror=True needs a scan with z > 0 throughout")
        z = np.concatenate([-z[::-1], z])
        amp = np.concatenate([amp[::-1], amp])
    return fwhm(amp, z)


def peak_ratio(a: Interferogram, b: Interferogram) -> float:
    if len(a) == 0 or len(b) == 0:
        raise DomainError("peak_ratio needs two non-empty interferograms")
    top_b = float(np.max(b.signal))
    if top_b == 0:
        raise DomainError("reference interferogram has zero peak")
    return float(np.max(a.signal)) / top_b


def calibrate_displacement(controls, signal, wavelength: float) -> CalibrationFit:
    """Fit ``z'(V) = c1 V + c2 V^2`` so that ``signal ~ C + A cos(2 pi z'(V)/wavelength + phi)``.

    The constant term is unobservable from fringes and is reported as 0 (it
    is absorbed in ``phase``). The sign is fixed by ``c1 > 0``. Controls are
    expected in increasing order with roughly uniform spacing.
    """
    v = np.asarray(controls, dtype=float)
    s = np.asarray(signal, dtype=float)
    if v.shape != s.shape or v.size < 16:
        raise MeasurementError("calibration needs matching arrays of at least 16 samples")
    if np.ptp(s) <= 1e-12 * max(np.max(np.abs(s)), 1e-300):
        raise MeasurementError("signal is constant: nothing to calibrate against")
    k = 2 * np.pi / wavelength
    v_scale = np.max(np.abs(v))

    # initial guess from the unwrapped phase of the analytic signal
    grid = np.linspace(v[0], v[-1], v.size)
    ac = np.interp(grid, v, s)
    ac = ac - ac.mean()
    phase = np.unwrap(np.angle(hilbert(ac)))
    trim = slice(v.size // 10, v.size - v.size // 10)
    p2, p1, _ = np.polyfit(grid[trim] / v_scale, phase[trim], 2)
    if p1 < 0:
        p1, p2 = -p1, -p2
    x0 = np.array([p1, p2])  # phase per unit scaled control

    u = v / v_scale

    def residual(x):
        theta = x[0] * u + x[1] * u**2
        design = np.stack([np.ones_like(u), np.cos(theta), np.sin(theta)], axis=1)
        coef, *_ = np.linalg.lstsq(design, s, rcond=None)
        return s - design @ coef

    res = least_squares(residual, x0, method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if not res.success or not np.all(np.isfinite(res.x)):
        raise MeasurementError(f"displacement calibration did not converge: {res.message}")
    p1, p2 = res.x
    if p1 < 0:
        p1, p2 = -p1, -p2
    theta = p1 * u + p2 * u**2
    if np.ptp(theta) < 3 * 2 * np.pi:
        raise MeasurementError("calibration data cover fewer than 3 fringe periods")
    design = np.stack([np.ones_like(u), np.cos(theta), np.sin(theta)], axis=1)
    coef, *_ = np.linalg.lstsq(design, s, rcond=None)
    resid = s - design @ coef
    return CalibrationFit(
        c0=0.0,
        c1=float(p1 / (k * v_scale)),
        c2=float(p2 / (k * v_scale**2)),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        offset=float(coef[0]),
        amplitude=float(np.hypot(coef[1], coef[2])),
        phase=float(np.angle(coef[1] - 1j * coef[2])),
    )
