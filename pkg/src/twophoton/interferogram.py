"""Interferogram container and its CSV + JSON sidecar serialisation."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError

CSV_HEADER = ("z_um", "signal")


@dataclass(frozen=True, eq=False)
class Interferogram:
    """Signal samples ordered by optical-path difference ``z`` (metres).

    ``metadata`` carries the regime label, the config echo/digest and any
    per-point extras (envelope scans store their local minima there).
    """

    z: np.ndarray
    signal: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        z = np.array(self.z, dtype=float).reshape(-1)
        s = np.array(self.signal, dtype=float).reshape(-1)
        if z.shape != s.shape:
            raise ConfigurationError("z and signal must have the same length")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(s))):
            raise ConfigurationError("interferogram values must be finite")
        if np.any(np.diff(z) <= 0):
            raise ConfigurationError("z must be strictly increasing")
        if np.any(s < 0):
            raise ConfigurationError("signals must be non-negative")
        z.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "signal", s)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self):
        return self.z.size

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.z.tolist(), self.signal.tolist()))

    @property
    def regime(self) -> str | None:
        return self.metadata.get("regime")

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for z, s in zip(self.z, self.signal):
            writer.writerow((f"{z * 1e6:.9g}", repr(float(s))))
        return buf.getvalue()

    def metadata_text(self) -> str:
        doc = dict(self.metadata)
        doc.setdefault("library_version", __version__)
        doc["n_points"] = len(self)
        return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"

    def save(self, stem) -> tuple[Path, Path]:
        """Write ``<stem>.csv`` and ``<stem>.json`` atomically."""
        stem = Path(stem)
        csv_path = stem.with_suffix(".csv")
        json_path = stem.with_suffix(".json")
        atomic_write_text(csv_path, self.csv_text())
        atomic_write_text(json_path, self.metadata_text())
        return csv_path, json_path


def load_interferogram(path) -> Interferogram:
    """Read a CSV written by :meth:`Interferogram.save` (sidecar JSON optional)."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise ConfigurationError(f"{path}: expected header {','.join(CSV_HEADER)}")
        rows = [(float(a) * 1e-6, float(b)) for a, b in reader]
    meta_path = path.with_suffix(".json")
    metadata = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    z, s = (np.array(col) for col in zip(*rows)) if rows else (np.empty(0), np.empty(0))
    return Interferogram(z, s, metadata)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def config_digest(doc: dict) -> str:
    text = json.dumps(_jsonable(doc), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj
