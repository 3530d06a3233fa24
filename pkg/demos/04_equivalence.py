"""Classical pulses standing in for photon pairs.

The pulse gets the single-photon bandwidth and the filter gets the pair's
sum-frequency bandwidth. After peak normalisation the classical energy and
the coincidence probability trace the same curve in both regimes.
"""
import numpy as np

from twophoton import compare, matched_classical_config, QuantumConfig, scan_classical, scan_quantum
from twophoton.wavecore import make_grid

qcfg = QuantumConfig(pump_bandwidth=4e9, single_bandwidth=200e9)
ccfg = matched_classical_config(qcfg, make_grid(2**14, 100e-15))
print(f"matched pulse {ccfg.pulse.fwhm_duration * 1e12:.3f} ps, "
      f"filter {ccfg.filter.fwhm_bandwidth * 1e9:.5f} nm at {ccfg.filter.center_wavelength * 1e9:.0f} nm")

lam = 782e-9
for label, centre in (("small z", 0.0), ("large z", 2875 * lam)):
    zs = centre + np.linspace(-2 * lam, 2 * lam, 81)
    report = compare(scan_classical(ccfg, zs), scan_quantum(qcfg, zs))
    print(f"{label}: RMS {report.rms_deviation:.2e}, max {report.max_deviation:.2e}, "
          f"periods {report.metrics_a.period * 1e9:.1f} / {report.metrics_b.period * 1e9:.1f} nm")
