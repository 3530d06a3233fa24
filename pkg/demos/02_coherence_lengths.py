"""Fringe envelopes traced with envelope_scan.

Instead of a nanometre-step scan over millimetres, each centre is probed at
eight points within one carrier period and the local fringe extremes come
from a small trigonometric fit. The white-light envelope is set by the pulse,
the sum-frequency envelope by the filter bandwidth.
"""
import numpy as np

from twophoton import ClassicalConfig, FilterSpec, PulseSpec, envelope_fwhm, envelope_scan
from twophoton.pulsegen import coherence_length

pulse = PulseSpec(782e-9, 74.5e-15)
filt = FilterSpec(391e-9, 0.093e-9)
config = ClassicalConfig(pulse, filt)

white = envelope_scan(config, np.arange(-40e-6, 40.5e-6, 2e-6))
sfg = envelope_scan(config, np.arange(60e-6, 3000e-6, 60e-6))

w_white = envelope_fwhm(white)
w_sfg = envelope_fwhm(sfg, mirror=True)
print(f"white-light envelope FWHM   {w_white * 1e6:8.1f} um   (c tau = {coherence_length(pulse.fwhm_duration) * 1e6:.1f} um)")
print(f"sum-frequency envelope FWHM {w_sfg * 1e3:8.3f} mm   ((4 ln2/pi) lambda^2/dlambda = {filt.coherence_length * 1e3:.3f} mm)")
print(f"ratio {w_sfg / w_white:.1f}")

# Normalised to its peak the white-light signal is ((cos phi + gamma)/2)^2 with
# gamma = exp(-ln2 z^2 / (c tau)^2). It swings between (1 + gamma)^2/4 and 0,
# so the fringe amplitude (1 + gamma)^2/8 is half its peak where gamma = sqrt2 - 1,
# about 2.3 c tau wide.
z = np.linspace(-80e-6, 80e-6, 16001)
gamma = np.exp(-np.log(2) * z**2 / coherence_length(pulse.fwhm_duration) ** 2)
amp = (1 + gamma) ** 2 / 8
half = z[amp >= amp.max() / 2]
print(f"closed-form fringe-amplitude FWHM {(half[-1] - half[0]) * 1e6:.1f} um")
