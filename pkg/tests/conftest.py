import numpy as np
import pytest
from hypothesis import settings

from twophoton.classical import ClassicalConfig, FilterSpec
from twophoton.pulsegen import PulseSpec
from twophoton.quantum import QuantumConfig
from twophoton.wavecore import default_grid

settings.register_profile("fast", max_examples=40, deadline=None)
settings.load_profile("fast")

LAMBDA0 = 782e-9
TAU = 74.5e-15


def paper_config(bandwidth_nm=0.039, shape="gaussian"):
    return ClassicalConfig(
        PulseSpec(LAMBDA0, TAU),
        FilterSpec(391e-9, bandwidth_nm * 1e-9, shape),
        grid=default_grid(),
    )


@pytest.fixture(scope="session")
def config():
    return paper_config()


@pytest.fixture(scope="session")
def qcfg():
    # scaled desk parameters: l2 / l1 = 50
    return QuantumConfig(pump_bandwidth=4e9, single_bandwidth=200e9, n=1024, dnu=1e9)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
