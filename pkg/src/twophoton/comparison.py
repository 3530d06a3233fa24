"""Side-by-side comparison of the classical (time-reversed) and quantum (time-forward) fringes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import ClassicalConfig, FilterSpec
from .errors import MeasurementError, UsageError
from .fringes import FringeMetrics, fit_fringe
from .interferogram import Interferogram
from .pulsegen import GAUSSIAN_TBP, PulseSpec
from .quantum import QuantumConfig
from .wavecore import C, SampledGrid


@dataclass(frozen=True)
class ComparisonReport:
    rms_deviation: float
    max_deviation: float
    n_points: int
    phase_range: tuple[float, float]
    metrics_a: FringeMetrics | None
    metrics_b: FringeMetrics | None

    def to_dict(self) -> dict:
        return {
            "rms_deviation": self.rms_deviation,
            "max_deviation": self.max_deviation,
            "n_points": self.n_points,
            "phase_range": list(self.phase_range),
            "metrics_a": self.metrics_a.to_dict() if self.metrics_a else None,
            "metrics_b": self.metrics_b.to_dict() if self.metrics_b else None,
        }


def _phase_axis(ig: Interferogram, omega0: float | None) -> np.ndarray:
    w = omega0 if omega0 is not None else ig.metadata.get("carrier_rad_s")
    if w is None:
        raise UsageError("interferogram has no carrier in its metadata; pass omega0")
    return w * ig.z / C


def _metrics(ig):
    try:
        return fit_fringe(ig)
    except MeasurementError:
        return None


def compare(a: Interferogram, b: Interferogram, *, omega0: float | None = None) -> ComparisonReport:
    """Peak-normalise both records, resample on a shared ``w0 z / c`` axis, report the RMS gap."""
    if len(a) == 0 or len(b) == 0:
        raise UsageError("cannot compare empty interferograms")
    pa, pb = _phase_axis(a, omega0), _phase_axis(b, omega0)
    lo, hi = max(pa[0], pb[0]), min(pa[-1], pb[-1])
    if not hi > lo:
        raise UsageError("interferograms cover non-overlapping phase ranges")
    ma, mb = np.max(a.signal), np.max(b.signal)
    if ma <= 0 or mb <= 0:
        raise UsageError("cannot peak-normalise an all-zero interferogram")
    n = max(len(a), len(b))
    phase = np.linspace(lo, hi, n)
    ya = np.interp(phase, pa, a.signal / ma)
    yb = np.interp(phase, pb, b.signal / mb)
    diff = ya - yb
    return ComparisonReport(
        rms_deviation=float(np.sqrt(np.mean(diff**2))),
        max_deviation=float(np.max(np.abs(diff))),
        n_points=n,
        phase_range=(float(lo), float(hi)),
        metrics_a=_metrics(a),
        metrics_b=_metrics(b),
    )


def matched_classical_config(qcfg: QuantumConfig, grid: SampledGrid) -> ClassicalConfig:
    """Classical counterpart of a biphoton configuration.

    The pulse spectrum gets the single-photon marginal width and the filter
    gets the width of the two-photon sum-frequency distribution, so the pulse
    plays the role of one photon and the filter the role of the pump.
    """
    lam0 = qcfg.center_wavelength
    tau = GAUSSIAN_TBP / qcfg.marginal_fwhm
    lam_sfg = lam0 / 2
    bandwidth = qcfg.sum_frequency_fwhm * lam_sfg**2 / C
    return ClassicalConfig(PulseSpec(lam0, tau), FilterSpec(lam_sfg, bandwidth), grid=grid)
