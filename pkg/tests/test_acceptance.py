"""Acceptance criteria, run through the bundled scenarios.

Each test prints one PASS/FAIL line (collected in the terminal summary) and
then asserts the same condition, so a failing criterion shows up in both.
"""
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from twophoton.classical import FilterSpec
from twophoton.cli import analyse, build_run, parse_config, read_config, run_scans
from twophoton.quantum import analytic_p_large, analytic_p_small

from conftest import ACCEPTANCE_LINES

TESTS = Path(__file__).parent


def record(number, title, ok, detail):
    line = f"[{number}] {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


class ScenarioRun:
    def __init__(self, name, mode):
        self.cfg = parse_config(read_config(name))
        self.plan = build_run(self.cfg, mode)
        t0 = time.perf_counter()
        self.results = run_scans(self.plan)
        self.scan_seconds = time.perf_counter() - t0
        self.metrics = analyse(self.cfg.get("analysis", {}), self.results, self.plan)
        self.seconds = time.perf_counter() - t0


@pytest.fixture(scope="module")
def fig3():
    return ScenarioRun("fig3", "simulate-classical")


@pytest.fixture(scope="module")
def fig4():
    return ScenarioRun("fig4", "simulate-classical")


@pytest.fixture(scope="module")
def equivalence():
    return ScenarioRun("equivalence", "compare")


def test_criterion_1_period_halving(fig3):
    white = fig3.metrics["fringe"]["white"]["period"]
    sfg = fig3.metrics["fringe"]["sfg"]["period"]
    ratio = fig3.metrics["period_ratio"]["sfg/white"]
    ok = (abs(white / 782e-9 - 1) <= 0.005 and abs(sfg / 391e-9 - 1) <= 0.005
          and abs(ratio - 0.5) <= 0.005 and fig3.seconds < 60)
    record(1, "period halving", ok,
           f"white {white * 1e9:.2f} nm, sum-frequency {sfg * 1e9:.2f} nm, "
           f"ratio {ratio:.5f}, {fig3.seconds:.1f} s")
    assert ok


def test_criterion_2_peak_ratio(fig3):
    ratio = fig3.metrics["peak_ratio"]["white/sfg"]
    ok = abs(ratio / 4.0 - 1) <= 0.01 and fig3.seconds < 60
    record(2, "peak ratio", ok, f"{ratio:.4f} (target 4.00 +- 1%), {fig3.seconds:.1f} s")
    assert ok


def test_criterion_3_visibility(fig3):
    v_white = fig3.metrics["fringe"]["white"]["visibility"]
    v_sfg = fig3.metrics["fringe"]["sfg"]["visibility"]
    ok = v_white >= 0.999 and v_sfg >= 0.999
    record(3, "visibility", ok, f"white {v_white:.5f}, sum-frequency {v_sfg:.5f} (target >= 0.999)")
    assert ok


def test_criterion_4_coherence_lengths(fig4):
    widths = fig4.metrics["envelope_fwhm_m"]
    white = widths["white_envelope"]
    sfg = widths["sfg_envelope"]
    l2 = FilterSpec(391e-9, 0.093e-9).coherence_length
    ok_white = abs(white / 23e-6 - 1) <= 0.10
    ok_sfg = abs(sfg / l2 - 1) <= 0.10
    ok = ok_white and ok_sfg and fig4.seconds < 300
    record(4, "coherence lengths", ok,
           f"white {white * 1e6:.1f} um (target 23 +- 10%), sum-frequency {sfg * 1e3:.3f} mm "
           f"(target {l2 * 1e3:.3f} mm +- 10%), ratio {sfg / white:.1f}, {fig4.seconds:.0f} s")
    assert ok


def test_criterion_5_quantum_limits(equivalence):
    small = equivalence.results["quantum_small"]
    large = equivalence.results["quantum_large"]
    w0 = equivalence.plan["quantum"].omega0
    rms_small = np.sqrt(np.mean((small.signal - analytic_p_small(small.z, w0)) ** 2))
    rms_large = np.sqrt(np.mean((large.signal - analytic_p_large(large.z, w0)) ** 2))
    p0 = float(np.interp(0.0, small.z, small.signal))
    top = float(np.max(large.signal))
    ok = (rms_small < 1e-3 and rms_large < 1e-3 and abs(p0 - 0.5) < 1e-3
          and abs(top / 0.125 - 1) <= 0.02 and equivalence.scan_seconds < 300)
    record(5, "quantum analytic limits", ok,
           f"RMS small-z {rms_small:.2e}, large-z {rms_large:.2e}, p(0) {p0:.6f}, "
           f"large-z max {top:.5f}, n = {equivalence.plan['quantum'].n}, "
           f"{equivalence.scan_seconds:.0f} s")
    assert ok


def test_criterion_6_time_reversal_equivalence(equivalence):
    reports = equivalence.metrics["compare"]
    small = reports["classical_small:quantum_small"]["rms_deviation"]
    large = reports["classical_large:quantum_large"]["rms_deviation"]
    ok = small < 0.01 and large < 0.01
    record(6, "time-reversal equivalence", ok,
           f"normalised RMS gap small-z {small:.2e}, large-z {large:.2e} (target < 1e-2)")
    assert ok


PROPERTY_SUITES = [
    "test_wavecore.py::test_parseval_and_round_trip",
    "test_wavecore.py::test_linearity",
    "test_wavecore.py::test_shift_theorem",
    "test_classical.py::test_bandpass_never_adds_energy",
    "test_classical.py::test_narrowband_convergence",
    "test_fringes.py::test_scale_equivariance",
    "test_fringes.py::test_shift_equivariance",
    "test_fringes.py::test_calibration_round_trip",
    "test_fringes.py::test_calibration_linear_data",
    "test_fringes.py::test_calibration_cross_application",
    "test_classical.py::test_scan_is_deterministic_and_order_independent",
    "test_quantum.py::test_scan_deterministic",
    "test_cli.py::test_outputs_are_byte_identical",
]


def test_criterion_7_property_suites():
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
         *[str(TESTS / node) for node in PROPERTY_SUITES]],
        capture_output=True, text=True, cwd=TESTS.parent,
    )
    seconds = time.perf_counter() - t0
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0 and seconds < 120
    record(7, "property suites", ok, f"{summary}, {seconds:.0f} s")
    assert ok, proc.stdout[-2000:]
