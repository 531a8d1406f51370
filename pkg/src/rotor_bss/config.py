"""Run configuration loaded from a single JSON document.

Every field is optional; omitted fields fall back to the defaults below, which
mirror the two-source rotor simulation (N=1000, SNR=-5 dB, fixed 2x2 mixing).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .autocorr import DEFAULT_DROP_LAG, AutocorrConfig
from .errors import ValidationError
from .msnr import DEFAULT_WINDOW, MsnrConfig
from .signals import MixingSpec

__all__ = ["SourceSpec", "RunConfig", "load_config", "PAPER_MIXING"]

PAPER_MIXING = ((0.4684, 0.1952), (0.7384, 0.5483))
DEFAULT_SNR_DB = -5.0


@dataclass(frozen=True)
class SourceSpec:
    freq: float
    amplitude: float = 1.0
    phase: float = 0.0


def _default_sources():
    return (SourceSpec(10.0), SourceSpec(25.0))


@dataclass(frozen=True)
class RunConfig:
    sources: tuple = field(default_factory=_default_sources)
    sample_rate: float = 1000.0
    n_samples: int = 1000
    mixing: tuple = PAPER_MIXING
    snr_db: Optional[float] = DEFAULT_SNR_DB
    seed: int = 0
    denoise: AutocorrConfig = AutocorrConfig()
    msnr: MsnrConfig = MsnrConfig()

    def __post_init__(self):
        self.validate()

    def validate(self):
        fs, n = self.sample_rate, self.n_samples
        if not (isinstance(fs, (int, float)) and math.isfinite(fs) and fs > 0):
            raise ValidationError(f"sample_rate: must be a positive number, got {fs!r}")
        if not (isinstance(n, int) and n >= 2):
            raise ValidationError(f"n_samples: must be an integer >= 2, got {n!r}")
        if not self.sources:
            raise ValidationError("sources: at least one source is required")
        for i, src in enumerate(self.sources):
            if src.freq is None or not (0 < src.freq < fs / 2):
                raise ValidationError(f"sources[{i}].freq: {src.freq} Hz must lie in (0, {fs / 2}) Hz")
            if not (math.isfinite(src.amplitude) and src.amplitude != 0):
                raise ValidationError(f"sources[{i}].amplitude: must be finite and nonzero")
            if not math.isfinite(src.phase):
                raise ValidationError(f"sources[{i}].phase: must be finite")
        try:
            spec = self.mixing_spec()
        except ValidationError as exc:
            raise ValidationError(f"mixing: {exc}") from None
        if spec.A.shape[0] != len(self.sources):
            raise ValidationError(
                f"mixing: matrix is {spec.A.shape[0]}x{spec.A.shape[1]} but there are {len(self.sources)} sources"
            )
        try:
            lag_cfg = self.denoise.resolve(n)
        except ValidationError as exc:
            raise ValidationError(f"denoise: {exc}") from None
        if self.msnr.window >= lag_cfg.max_lag - lag_cfg.drop_lag:
            raise ValidationError(
                f"msnr.window: {self.msnr.window} must be shorter than the retained lag window "
                f"({lag_cfg.max_lag - lag_cfg.drop_lag} lags)"
            )

    def mixing_spec(self, seed=None) -> MixingSpec:
        return MixingSpec(np.array(self.mixing, dtype=float), self.snr_db, self.seed if seed is None else seed)

    def resolved_denoise(self) -> AutocorrConfig:
        return self.denoise.resolve(self.n_samples)

    def replace(self, **changes) -> "RunConfig":
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return RunConfig(**values)

    def echo(self) -> dict:
        lag_cfg = self.resolved_denoise()
        return {
            "sources": [{"freq": s.freq, "amplitude": s.amplitude, "phase": s.phase} for s in self.sources],
            "sample_rate": self.sample_rate,
            "n_samples": self.n_samples,
            "A": [list(row) for row in self.mixing],
            "snr_db": self.snr_db,
            "window": self.msnr.window,
            "max_lag": lag_cfg.max_lag,
            "drop_lag": lag_cfg.drop_lag,
        }


def _number(doc, key, path, default, kind=float):
    value = doc.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}{key}: expected a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ValidationError(f"{path}{key}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def config_from_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ValidationError("config: top level must be a JSON object")
    known = {"sources", "sample_rate", "n_samples", "mixing", "snr_db", "seed", "denoise", "msnr"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ValidationError(f"config: unknown field(s) {unknown}")

    sources = _default_sources()
    if "sources" in doc:
        if not isinstance(doc["sources"], list):
            raise ValidationError("sources: expected a list")
        sources = []
        for i, item in enumerate(doc["sources"]):
            if not isinstance(item, dict) or "freq" not in item:
                raise ValidationError(f"sources[{i}]: expected an object with at least 'freq'")
            path = f"sources[{i}]."
            sources.append(
                SourceSpec(
                    _number(item, "freq", path, None),
                    _number(item, "amplitude", path, 1.0),
                    _number(item, "phase", path, 0.0),
                )
            )
        sources = tuple(sources)

    mixing = doc.get("mixing", PAPER_MIXING)
    if not (isinstance(mixing, (list, tuple)) and all(isinstance(r, (list, tuple)) for r in mixing)):
        raise ValidationError("mixing: expected a list of rows")
    for i, row in enumerate(mixing):
        for j, value in enumerate(row):
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"mixing[{i}][{j}]: expected a number, got {value!r}")
    mixing = tuple(tuple(float(v) for v in row) for row in mixing)
    if len({len(r) for r in mixing}) > 1:
        raise ValidationError("mixing: rows have different lengths")

    seed = _number(doc, "seed", "", 0, int)
    if seed is None or seed < 0:
        raise ValidationError(f"seed: must be an unsigned integer, got {seed!r}")

    den = doc.get("denoise", {})
    if not isinstance(den, dict):
        raise ValidationError("denoise: expected an object")
    try:
        denoise = AutocorrConfig(
            max_lag=_number(den, "max_lag", "denoise.", None, int),
            drop_lag=_number(den, "drop_lag", "denoise.", DEFAULT_DROP_LAG, int),
            estimator=den.get("estimator", "biased"),
        )
    except ValidationError as exc:
        raise ValidationError(f"denoise: {exc}") from None

    ms = doc.get("msnr", {})
    if not isinstance(ms, dict):
        raise ValidationError("msnr: expected an object")
    try:
        msnr = MsnrConfig(_number(ms, "window", "msnr.", DEFAULT_WINDOW, int), ms.get("padding", "reflect"))
    except ValidationError as exc:
        raise ValidationError(f"msnr: {exc}") from None

    snr = _number(doc, "snr_db", "", DEFAULT_SNR_DB)
    if snr is not None and not math.isfinite(snr):
        raise ValidationError("snr_db: must be finite or null")

    return RunConfig(
        sources=sources,
        sample_rate=_number(doc, "sample_rate", "", 1000.0),
        n_samples=_number(doc, "n_samples", "", 1000, int),
        mixing=mixing,
        snr_db=snr,
        seed=seed,
        denoise=denoise,
        msnr=msnr,
    )


def load_config(path=None) -> RunConfig:
    """Load a JSON config file; ``None`` gives the defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(doc)
