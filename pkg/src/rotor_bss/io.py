"""CSV signal files and JSON reports.

CSV layout::

    # sample_rate=1000
    # start_lag=10            (optional extra key=value lines)
    0.12345678901234567,-1.2345678901234567
    ...

One row per sample, one column per channel, no header. Floats use 17
significant digits so a write/read cycle is lossless.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .autocorr import LagSignal
from .errors import ValidationError
from .signals import MultichannelSignal

__all__ = [
    "SignalFile",
    "read_signal_file",
    "read_csv",
    "write_csv",
    "write_report",
    "atomic_write_text",
    "format_float",
    "jsonable",
]


def format_float(value) -> str:
    return "%.17g" % value


def atomic_write_text(path, text: str):
    """Write via a temp file in the target directory, then rename into place."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class SignalFile:
    path: Path
    signal: MultichannelSignal
    metadata: dict = field(default_factory=dict)

    @property
    def columns(self) -> int:
        return self.signal.channels

    def as_lag_signal(self) -> LagSignal:
        if "start_lag" not in self.metadata:
            raise ValidationError(f"{self.path}: no start_lag metadata; not a lag-domain file")
        return LagSignal(self.signal.data, int(self.metadata["start_lag"]), self.signal.sample_rate)


def read_signal_file(path) -> SignalFile:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc

    metadata = {}
    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                metadata[key.strip()] = value.strip()
            continue
        fields = stripped.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ValidationError(f"{path}: row {lineno} has {len(fields)} fields, expected {width}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            col = next(i for i, f in enumerate(fields, start=1) if not _is_float(f))
            raise ValidationError(f"{path}: row {lineno}, column {col}: non-numeric field {fields[col - 1]!r}") from None

    if "sample_rate" not in metadata:
        raise ValidationError(f"{path}: missing '# sample_rate=...' metadata")
    try:
        rate = float(metadata["sample_rate"])
    except ValueError:
        raise ValidationError(f"{path}: sample_rate {metadata['sample_rate']!r} is not a number") from None
    if not (math.isfinite(rate) and rate > 0):
        raise ValidationError(f"{path}: sample_rate must be positive, got {rate}")
    if not rows:
        raise ValidationError(f"{path}: no samples")
    signal = MultichannelSignal(np.array(rows).T, rate)
    return SignalFile(path, signal, metadata)


def _is_float(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_csv(path) -> MultichannelSignal:
    return read_signal_file(path).signal


def write_csv(signal, path, metadata=None):
    """Write a :class:`MultichannelSignal` or :class:`LagSignal` to ``path``.

    Lag signals also record ``start_lag``. Output bytes depend only on the data.
    """
    header = {"sample_rate": format_float(signal.sample_rate)}
    if isinstance(signal, LagSignal):
        header["start_lag"] = str(int(signal.start_lag))
    for key, value in (metadata or {}).items():
        header[key] = value if isinstance(value, str) else format_float(value)
    lines = [f"# {key}={value}" for key, value in header.items()]
    lines.extend(",".join(format_float(v) for v in row) for row in np.asarray(signal.data).T)
    atomic_write_text(path, "\n".join(lines) + "\n")


def jsonable(value):
    """Convert numpy containers to JSON types; non-finite floats become None."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_report(report, path):
    """Serialize a report mapping (or list of mappings) as deterministic JSON."""
    text = json.dumps(jsonable(report), indent=2, sort_keys=False, allow_nan=False)
    atomic_write_text(path, text + "\n")
