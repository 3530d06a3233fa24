import json

import numpy as np
import pytest

from twophoton import __version__
from twophoton.comparison import compare, matched_classical_config
from twophoton.errors import ConfigurationError, UsageError
from twophoton.interferogram import Interferogram, config_digest, file_digest, load_interferogram
from twophoton.quantum import QuantumConfig
from twophoton.wavecore import C, make_grid

W0 = 2 * np.pi * C / 782e-9


def sample(offset=0.0):
    z = np.linspace(-2e-6, 2e-6, 101) + offset
    return Interferogram(z, 1 + np.cos(W0 * z / C), {"regime": "white-light", "carrier_rad_s": W0})


def test_validation():
    with pytest.raises(ConfigurationError):
        Interferogram([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ConfigurationError):
        Interferogram([0.0, 1.0], [1.0, -1.0])
    with pytest.raises(ConfigurationError):
        Interferogram([0.0, 1.0], [1.0])
    with pytest.raises(ConfigurationError):
        Interferogram([0.0, 1.0], [1.0, np.inf])


def test_csv_format():
    ig = Interferogram([1.5e-6, 2.0e-6], [0.25, 1.0])
    assert ig.csv_text() == "z_um,signal\n1.5,0.25\n2,1.0\n"
    assert ig.points == [(1.5e-6, 0.25), (2.0e-6, 1.0)]


def test_save_and_load(tmp_path):
    ig = sample()
    csv_path, json_path = ig.save(tmp_path / "scan")
    meta = json.loads(json_path.read_text())
    assert meta["library_version"] == __version__
    assert meta["n_points"] == 101
    back = load_interferogram(csv_path)
    np.testing.assert_allclose(back.z, ig.z, rtol=1e-9, atol=1e-18)
    np.testing.assert_array_equal(back.signal, ig.signal)
    assert back.regime == "white-light"
    assert not list(tmp_path.glob(".*tmp"))


def test_load_rejects_wrong_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,y\n1,2\n")
    with pytest.raises(ConfigurationError):
        load_interferogram(p)


def test_digests_are_stable(tmp_path):
    assert config_digest({"b": 1, "a": [1.0, 2]}) == config_digest({"a": [1.0, 2], "b": 1})
    p = tmp_path / "x.txt"
    p.write_text("abc")
    assert file_digest(p) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_compare_identical():
    ig = sample()
    report = compare(ig, ig)
    assert report.rms_deviation == 0.0
    assert report.max_deviation == 0.0
    assert report.metrics_a.visibility == pytest.approx(1.0, abs=1e-6)


def test_compare_errors():
    with pytest.raises(UsageError):
        compare(sample(), sample(offset=10e-6))
    bare = Interferogram(sample().z, sample().signal)
    with pytest.raises(UsageError):
        compare(bare, bare)
    assert compare(bare, bare, omega0=W0).rms_deviation == 0.0


def test_matched_config_follows_quantum_bandwidths():
    q = QuantumConfig(4e9, 200e9)
    c = matched_classical_config(q, make_grid(2**14, 100e-15))
    assert c.pulse.spectral_fwhm == pytest.approx(q.marginal_fwhm, rel=1e-12)
    assert c.filter.bandwidth_hz == pytest.approx(q.sum_frequency_fwhm, rel=1e-12)
    assert c.filter.center_wavelength == pytest.approx(391e-9)
