"""Command-line front end.

    twophoton <mode> --config <path|fig3|fig4|equivalence> [--set section.key=value]... [--out DIR]

Modes: ``simulate-classical``, ``simulate-quantum``, ``compare`` (runs both
pipelines and compares matched scans) and ``analyze`` (fits an existing CSV).

Exit status: 0 on success, 2 for configuration problems (nothing is written),
1 when a computation stage fails.
"""
from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .classical import ClassicalConfig, FilterSpec, _input_pulse, envelope_scan, scan_classical
from .comparison import compare
from .errors import TwoPhotonError
from .fringes import envelope_fwhm, fit_fringe, peak_ratio
from .interferogram import _jsonable, atomic_write_text, file_digest, load_interferogram
from .pulsegen import PulseSpec
from .quantum import QuantumConfig, make_biphoton, scan_quantum
from .wavecore import C, SampledGrid

log = logging.getLogger("twophoton")

MODES = ("simulate-classical", "simulate-quantum", "analyze", "compare")
BUNDLED = ("fig3", "fig4", "equivalence")


class ConfigError(Exception):
    """Bad configuration; ``key`` is the dotted path of the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage


def _names(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _pairs(sep):
    def parse(text):
        out = []
        for item in _names(text):
            parts = [p.strip() for p in item.split(sep)]
            if len(parts) != 2 or not all(parts):
                raise ValueError(f"expected 'a{sep}b', got {item!r}")
            out.append(tuple(parts))
        return out
    return parse


def _bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _window(text):
    return None if text.strip().lower() == "auto" else float(text)


def _choice(*options):
    def parse(text):
        value = text.strip()
        if value not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return value
    return parse


SCHEMA = {
    "pulse": {
        "center_wavelength_nm": float,
        "fwhm_duration_fs": float,
        "peak_amplitude": float,
        "shape": _choice("gaussian"),
    },
    "filter": {
        "center_wavelength_nm": float,
        "bandwidth_nm": float,
        "shape": _choice("gaussian", "rectangular"),
    },
    "sfg": {"efficiency_re": float, "efficiency_im": float},
    "grid": {"n_samples": int, "dt_fs": float, "t_center_fs": float},
    "quantum": {
        "center_wavelength_nm": float,
        "pump_bandwidth_ghz": float,
        "single_bandwidth_ghz": float,
        "coincidence_window_fs": _window,
        "n_samples": int,
        "dnu_ghz": float,
    },
    "scan.*": {
        "pipeline": _choice("classical", "quantum"),
        "kind": _choice("fine", "envelope"),
        "start_um": float,
        "stop_um": float,
        "step_nm": float,
        "step_um": float,
        "regime": str,
    },
    "analysis": {
        "fringe": _names,
        "envelope": _names,
        "mirror": _names,
        "peak_ratio": _pairs("/"),
        "period_ratio": _pairs("/"),
        "compare": _pairs(":"),
    },
    "analyze": {"input": str, "kind": _choice("fringe", "envelope"), "mirror": _bool},
    "reference": None,  # free-form numbers echoed into the metrics
    "output": {"dir": str, "metadata": _bool},
}

REQUIRED = {
    "pulse": ("center_wavelength_nm", "fwhm_duration_fs"),
    "filter": ("center_wavelength_nm", "bandwidth_nm"),
    "quantum": ("pump_bandwidth_ghz", "single_bandwidth_ghz"),
    "scan.*": ("pipeline", "start_um", "stop_um"),
    "analyze": ("input",),
}


def _schema_for(section):
    if section.startswith("scan."):
        return "scan.*"
    return section


def read_config(source: str, overrides=()) -> configparser.ConfigParser:
    """Load an INI file (or bundled scenario name) and apply ``section.key=value`` overrides."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    path = Path(source)
    try:
        if path.exists():
            parser.read_string(path.read_text(), source=str(path))
        elif source in BUNDLED:
            text = resources.files("twophoton.scenarios").joinpath(f"{source}.ini").read_text()
            parser.read_string(text, source=source)
        else:
            raise ConfigError("--config", f"no such file or bundled scenario: {source}")
    except configparser.Error as exc:
        raise ConfigError("--config", f"cannot parse: {exc}") from exc
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, name = key.strip().rpartition(".")
        if not sep or not dot or not section or not name:
            raise ConfigError(key or item, "override must look like section.key=value")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, name, value.strip())
    return parser


def parse_config(parser: configparser.ConfigParser) -> dict:
    """Convert every entry according to :data:`SCHEMA`; unknown keys are errors."""
    out = {}
    for section in parser.sections():
        kind = _schema_for(section)
        if kind not in SCHEMA:
            raise ConfigError(section, "unknown section")
        fields = SCHEMA[kind]
        values = {}
        for key, raw in parser.items(section):
            path = f"{section}.{key}"
            conv = float if fields is None else fields.get(key)
            if conv is None:
                raise ConfigError(path, "unknown key")
            try:
                values[key] = conv(raw)
            except (TypeError, ValueError) as exc:
                raise ConfigError(path, f"invalid value {raw!r} ({exc})") from exc
        for key in REQUIRED.get(kind, ()):
            if key not in values:
                raise ConfigError(f"{section}.{key}", "missing required key")
        out[section] = values
    return out


@dataclass
class ScanPlan:
    name: str
    pipeline: str
    kind: str
    zs: np.ndarray
    regime: str | None


def _scan_positions(name, spec) -> np.ndarray:
    steps = [k for k in ("step_nm", "step_um") if k in spec]
    if len(steps) != 1:
        raise ConfigError(f"scan.{name}.step_nm", "give exactly one of step_nm / step_um")
    step = spec["step_nm"] * 1e-9 if steps[0] == "step_nm" else spec["step_um"] * 1e-6
    start, stop = spec["start_um"] * 1e-6, spec["stop_um"] * 1e-6
    if not step > 0:
        raise ConfigError(f"scan.{name}.{steps[0]}", "step must be positive")
    if not stop > start:
        raise ConfigError(f"scan.{name}.stop_um", "stop must exceed start")
    count = int(round((stop - start) / step)) + 1
    return np.linspace(start, stop, count)


def build_run(cfg: dict, mode: str) -> dict:
    """Turn parsed sections into pipeline configs and scan plans, validating everything."""
    run = {"classical": None, "quantum": None, "scans": []}
    wanted = {"simulate-classical": {"classical"}, "simulate-quantum": {"quantum"},
              "compare": {"classical", "quantum"}, "analyze": set()}[mode]

    scans = [(s[5:], v) for s, v in cfg.items() if s.startswith("scan.")]
    pipelines = {v["pipeline"] for _, v in scans} & wanted

    if "classical" in pipelines:
        run["classical"] = _classical_config(cfg)
    if "quantum" in pipelines:
        run["quantum"] = _quantum_config(cfg)

    for name, spec in scans:
        if spec["pipeline"] not in wanted:
            continue
        kind = spec.get("kind", "fine")
        if spec["pipeline"] == "quantum" and kind != "fine":
            raise ConfigError(f"scan.{name}.kind", "quantum scans support kind = fine only")
        zs = _scan_positions(name, spec)
        limit = (run["classical"] if spec["pipeline"] == "classical" else run["quantum"]).max_delay
        if np.max(np.abs(zs)) + 1e-6 > limit:
            raise ConfigError(f"scan.{name}.stop_um",
                              f"scan exceeds the delay guard of {limit * 1e6:.1f} um")
        run["scans"].append(ScanPlan(name, spec["pipeline"], kind, zs, spec.get("regime")))

    if mode == "analyze":
        if "analyze" not in cfg:
            raise ConfigError("analyze.input", "analyze mode needs an [analyze] section")
    elif not run["scans"]:
        raise ConfigError("scan", f"no scans for mode {mode}")

    names = {p.name for p in run["scans"]}
    all_names = {n for n, _ in scans}
    for key, value in cfg.get("analysis", {}).items():
        refs = [n for item in value for n in (item if isinstance(item, tuple) else (item,))]
        for ref in refs:
            if ref not in all_names:
                raise ConfigError(f"analysis.{key}", f"unknown scan {ref!r}")
    run["active"] = names
    return run


def _classical_config(cfg):
    for section in ("pulse", "filter"):
        if section not in cfg:
            raise ConfigError(section, "missing section")
    p, f = cfg["pulse"], cfg["filter"]
    g, s = cfg.get("grid", {}), cfg.get("sfg", {})
    try:
        pulse = PulseSpec(p["center_wavelength_nm"] * 1e-9, p["fwhm_duration_fs"] * 1e-15,
                          p.get("peak_amplitude", 1.0), p.get("shape", "gaussian"))
    except TwoPhotonError as exc:
        raise ConfigError("pulse", str(exc)) from exc
    try:
        filt = FilterSpec(f["center_wavelength_nm"] * 1e-9, f["bandwidth_nm"] * 1e-9,
                          f.get("shape", "gaussian"))
    except TwoPhotonError as exc:
        raise ConfigError("filter", str(exc)) from exc
    try:
        grid = SampledGrid(g.get("n_samples", 2**16), g.get("dt_fs", 2.0) * 1e-15,
                           g.get("t_center_fs", 0.0) * 1e-15)
    except TwoPhotonError as exc:
        raise ConfigError("grid", str(exc)) from exc
    try:
        config = ClassicalConfig(pulse, filt,
                                 complex(s.get("efficiency_re", 1.0), s.get("efficiency_im", 0.0)),
                                 grid)
        _input_pulse(pulse, grid)  # checks grid margins against the pulse
    except TwoPhotonError as exc:
        raise ConfigError("grid", str(exc)) from exc
    return config


def _quantum_config(cfg):
    if "quantum" not in cfg:
        raise ConfigError("quantum", "missing section")
    q = cfg["quantum"]
    window = q.get("coincidence_window_fs")
    try:
        config = QuantumConfig(
            pump_bandwidth=q["pump_bandwidth_ghz"] * 1e9,
            single_bandwidth=q["single_bandwidth_ghz"] * 1e9,
            coincidence_window=None if window is None else window * 1e-15,
            n=q.get("n_samples", 1024),
            dnu=q.get("dnu_ghz", 1.0) * 1e9,
            center_wavelength=q.get("center_wavelength_nm", 782.0) * 1e-9,
        )
        make_biphoton(config)
    except TwoPhotonError as exc:
        raise ConfigError("quantum", str(exc)) from exc
    return config


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (TwoPhotonError, ValueError, FloatingPointError) as exc:
        raise StageError(name, exc) from exc


def run_scans(run: dict, workers: int | None = None) -> dict:
    """Evaluate every planned scan; returns ``{scan name: Interferogram}`` in plan order."""
    results = {}
    for plan in run["scans"]:
        t0 = time.perf_counter()
        if plan.pipeline == "classical":
            fn = envelope_scan if plan.kind == "envelope" else scan_classical
            ig = _stage(f"scan:{plan.name}", fn, run["classical"], plan.zs,
                        regime=plan.regime, workers=workers)
        else:
            ig = _stage(f"scan:{plan.name}", scan_quantum, run["quantum"], plan.zs,
                        regime=plan.regime, workers=workers)
        log.info("scan %s: %d points in %.1f s", plan.name, len(ig), time.perf_counter() - t0)
        ig.metadata["scan_name"] = plan.name
        results[plan.name] = ig
    return results


def execute(mode: str, cfg: dict, run: dict, echo: dict, workers: int | None = None) -> dict:
    """Run the scans and analyses; return ``{filename: text}`` for everything to write."""
    files = {}
    results = run_scans(run, workers)
    for name, ig in results.items():
        ig.metadata["scenario"] = echo
        files[f"{name}.csv"] = ig.csv_text()
        if cfg.get("output", {}).get("metadata", True):
            files[f"{name}.json"] = ig.metadata_text()

    metrics = {"mode": mode, "library_version": __version__, "scenario": echo}
    if mode == "analyze":
        metrics.update(_analyze(cfg["analyze"]))
    else:
        metrics.update(analyse(cfg.get("analysis", {}), results, run))
    if "reference" in cfg:
        metrics["reference"] = cfg["reference"]
    files["metrics.json"] = json.dumps(_jsonable(metrics), indent=2, sort_keys=True) + "\n"
    return files


def analyse(spec: dict, results: dict, run: dict) -> dict:
    """Metrics requested by an ``[analysis]`` section, for the scans present in ``results``."""
    out = {}
    active = run["active"]

    def available(*names):
        return all(n in active for n in names)

    fits = {}
    for name in spec.get("fringe", []):
        if available(name):
            fits[name] = _stage(f"analysis:fringe:{name}", fit_fringe, results[name])
    if fits:
        out["fringe"] = {k: v.to_dict() for k, v in fits.items()}

    ratios = {}
    for a, b in spec.get("period_ratio", []):
        if available(a, b):
            fa = fits.get(a) or _stage(f"analysis:fringe:{a}", fit_fringe, results[a])
            fb = fits.get(b) or _stage(f"analysis:fringe:{b}", fit_fringe, results[b])
            ratios[f"{a}/{b}"] = fa.period / fb.period
    if ratios:
        out["period_ratio"] = ratios

    peaks = {}
    for a, b in spec.get("peak_ratio", []):
        if available(a, b):
            peaks[f"{a}/{b}"] = _stage("analysis:peak_ratio", peak_ratio, results[a], results[b])
    if peaks:
        out["peak_ratio"] = peaks

    mirrored = set(spec.get("mirror", []))
    widths = {}
    for name in spec.get("envelope", []):
        if available(name):
            widths[name] = _stage(f"analysis:envelope:{name}", envelope_fwhm, results[name],
                                  mirror=name in mirrored)
    if widths:
        out["envelope_fwhm_m"] = widths
        if run["classical"] is not None:
            cc = run["classical"]
            out["theory"] = {
                "pulse_coherence_length_m": C * cc.pulse.fwhm_duration,
                "filter_coherence_length_m": cc.filter.coherence_length,
            }

    comparisons = {}
    for a, b in spec.get("compare", []):
        if available(a, b):
            report = _stage(f"analysis:compare:{a}:{b}", compare, results[a], results[b])
            comparisons[f"{a}:{b}"] = report.to_dict()
    if comparisons:
        out["compare"] = comparisons
    return out


def _analyze(spec):
    path = Path(spec["input"])
    ig = _stage("analyze:load", load_interferogram, path)
    out = {"input": str(path), "input_digest": file_digest(path)}
    if spec.get("kind", "fringe") == "fringe":
        out["fringe"] = _stage("analyze:fringe", fit_fringe, ig).to_dict()
    else:
        out["envelope_fwhm_m"] = _stage("analyze:envelope", envelope_fwhm, ig,
                                        mirror=spec.get("mirror", False))
    out["peak"] = float(np.max(ig.signal)) if len(ig) else None
    return out


def _echo(parser: configparser.ConfigParser) -> dict:
    return {s: dict(parser.items(s)) for s in parser.sections() if s != "output"}


def run(mode: str, config_path: str, overrides=(), out_dir=None, workers=None) -> int:
    try:
        parser = read_config(config_path, overrides)
        cfg = parse_config(parser)
        plan = build_run(cfg, mode)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    target = Path(out_dir or cfg.get("output", {}).get("dir", "out"))
    try:
        files = execute(mode, cfg, plan, _echo(parser), workers)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name in sorted(files):
        atomic_write_text(target / name, files[name])
    print(f"wrote {len(files)} files to {target}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="twophoton", description=__doc__.split("\n\n")[0])
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", required=True,
                    help="INI file, or one of the bundled scenarios: " + ", ".join(BUNDLED))
    ap.add_argument("--set", dest="overrides", action="append", default=[],
                    metavar="SECTION.KEY=VALUE", help="override a config entry (repeatable)")
    ap.add_argument("--out", help="output directory (default: [output] dir)")
    ap.add_argument("--workers", type=int, default=None, help="threads per scan")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return run(args.mode, args.config, args.overrides, args.out, args.workers)


if __name__ == "__main__":
    sys.exit(main())
