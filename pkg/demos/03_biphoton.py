"""Coincidence fringes of a frequency-anticorrelated photon pair.

The pair has a broad single-photon spectrum (short l1) and a narrow
sum-frequency spectrum (long l2). Inside l1 the coincidence rate is the
square of the one-photon fringe; between l1 and l2, with a window shorter
than the arm delay, only both-short and both-long pairs count and the fringe
has half the period.
"""
import numpy as np

from twophoton import QuantumConfig, fit_fringe, make_biphoton, scan_quantum
from twophoton.quantum import analytic_p_large, analytic_p_small
from twophoton.wavecore import C

cfg = QuantumConfig(pump_bandwidth=4e9, single_bandwidth=200e9, n=1024, dnu=1e9)
psi = make_biphoton(cfg)
print(f"norm {psi.norm:.12f}, grid {cfg.n} x {cfg.n}, dt = {cfg.dt * 1e15:.1f} fs")
print(f"l1 ~ c / marginal FWHM = {C / cfg.marginal_fwhm * 1e6:.0f} um, "
      f"l2 ~ c / sum FWHM = {C / cfg.sum_frequency_fwhm * 1e3:.1f} mm")

lam = 782e-9
small = scan_quantum(cfg, np.linspace(-2 * lam, 2 * lam, 81))
z0 = 2875 * lam
large = scan_quantum(cfg, z0 + np.linspace(-2 * lam, 2 * lam, 81))
w0 = cfg.omega0

for name, ig, model in (("small z", small, analytic_p_small), ("large z", large, analytic_p_large)):
    rms = np.sqrt(np.mean((ig.signal - model(ig.z, w0)) ** 2))
    m = fit_fringe(ig)
    print(f"{name}: regime {ig.regime}, max p = {ig.signal.max():.5f}, "
          f"period {m.period * 1e9:.1f} nm, RMS vs closed form {rms:.1e}")
print(f"window at z0: {cfg.window_for(z0) * 1e15:.0f} fs")
