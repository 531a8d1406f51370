"""Source generation, calibrated white Gaussian noise and the noisy mixing model.

Signals are stored channel-major: ``data[i, k]`` is sample ``k`` of channel ``i``.
Observations follow ``x = A (s + v)``, i.e. noise enters each source *before*
mixing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError

__all__ = [
    "MultichannelSignal",
    "MixingSpec",
    "gen_sinusoid",
    "gen_awgn",
    "mix",
    "measure_snr",
    "noise_rng",
]


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class MultichannelSignal:
    """An ``n x N`` block of real samples taken at ``sample_rate`` Hz."""

    data: np.ndarray
    sample_rate: float = 1.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim == 1:
            data = data[np.newaxis, :]
        if data.ndim != 2:
            raise ValidationError(f"signal data must be 2-D (channels x samples), got shape {data.shape}")
        if data.shape[0] < 1:
            raise ValidationError("signal needs at least one channel")
        if data.shape[1] < 2:
            raise ValidationError(f"signal needs at least 2 samples, got {data.shape[1]}")
        if not np.all(np.isfinite(data)):
            raise ValidationError("signal contains non-finite samples")
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ValidationError(f"sample_rate must be a positive real, got {self.sample_rate!r}")
        object.__setattr__(self, "data", _frozen(data))
        object.__setattr__(self, "sample_rate", float(self.sample_rate))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def samples(self) -> int:
        return self.data.shape[1]

    def power(self) -> np.ndarray:
        """Mean power per channel."""
        return np.mean(self.data**2, axis=1)

    def with_data(self, data) -> "MultichannelSignal":
        return MultichannelSignal(data, self.sample_rate)

    @classmethod
    def stack(cls, signals) -> "MultichannelSignal":
        signals = list(signals)
        rates = {s.sample_rate for s in signals}
        if len(rates) != 1:
            raise ValidationError(f"cannot stack signals with different sample rates {sorted(rates)}")
        return cls(np.vstack([s.data for s in signals]), rates.pop())


@dataclass(frozen=True)
class MixingSpec:
    """Mixing matrix plus noise calibration.

    ``snr_db=None`` means a noiseless mixture.
    """

    A: np.ndarray
    snr_db: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError(f"mixing matrix must be square, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValidationError("mixing matrix contains non-finite entries")
        n = A.shape[0]
        scale = np.max(np.abs(A)) if A.size else 0.0
        if scale == 0.0 or abs(np.linalg.det(A)) <= 1e-12 * scale**n:
            raise ValidationError("mixing matrix is singular")
        if self.snr_db is not None and not np.isfinite(self.snr_db):
            raise ValidationError(f"snr_db must be finite, got {self.snr_db!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValidationError(f"seed must be an unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "seed", int(self.seed))
        if self.snr_db is not None:
            object.__setattr__(self, "snr_db", float(self.snr_db))


def gen_sinusoid(freq, amplitude, phase, sample_rate, n_samples) -> MultichannelSignal:
    """One-channel ``amplitude * sin(2 pi freq k / sample_rate + phase)``."""
    if not freq > 0:
        raise ValidationError(f"frequency must be positive, got {freq}")
    if not sample_rate > 0:
        raise ValidationError(f"sample_rate must be positive, got {sample_rate}")
    nyquist = sample_rate / 2
    if freq >= nyquist:
        raise ValidationError(f"frequency {freq} Hz must be below the Nyquist bound {nyquist} Hz")
    if n_samples < 2:
        raise ValidationError(f"n_samples must be >= 2, got {n_samples}")
    k = np.arange(int(n_samples))
    return MultichannelSignal(amplitude * np.sin(2 * np.pi * freq * k / sample_rate + phase), sample_rate)


def noise_rng(seed: int, channel: int) -> np.random.Generator:
    """PCG64 stream for one noise channel, keyed on ``(seed, channel)``.

    Distinct channels get statistically independent streams through numpy's
    SeedSequence entropy mixing.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(channel)])))


def gen_awgn(reference: MultichannelSignal, snr_db, seed) -> MultichannelSignal:
    """White Gaussian noise scaled so each channel sits at ``snr_db`` below ``reference``."""
    if not np.isfinite(snr_db):
        raise ValidationError(f"snr_db must be finite, got {snr_db!r}")
    power = reference.power()
    dead = np.flatnonzero(power == 0)
    if dead.size:
        raise ValidationError(f"reference channel {int(dead[0])} has zero power; SNR is undefined")
    variance = power / 10.0 ** (snr_db / 10.0)
    noise = np.empty_like(reference.data)
    for i, var in enumerate(variance):
        noise[i] = noise_rng(seed, i).standard_normal(reference.samples) * np.sqrt(var)
    return reference.with_data(noise)


def mix(sources: MultichannelSignal, spec: MixingSpec):
    """Return ``(A (s + v), v)``. ``v`` is zero when ``spec.snr_db`` is None."""
    n = sources.channels
    if spec.A.shape != (n, n):
        raise ValidationError(f"mixing matrix shape {spec.A.shape} does not match {n} source channels")
    if spec.snr_db is None:
        noise = sources.with_data(np.zeros_like(sources.data))
        mixed = spec.A @ sources.data
    else:
        noise = gen_awgn(sources, spec.snr_db, spec.seed)
        mixed = spec.A @ (sources.data + noise.data)
    return sources.with_data(mixed), noise


def measure_snr(clean: MultichannelSignal, noisy: MultichannelSignal) -> np.ndarray:
    """Per-channel ``10 log10(P_clean / P_residual)``; ``inf`` when the residual vanishes."""
    if clean.data.shape != noisy.data.shape:
        raise ValidationError(f"shape mismatch: {clean.data.shape} vs {noisy.data.shape}")
    p_clean = clean.power()
    p_resid = np.mean((noisy.data - clean.data) ** 2, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p_resid == 0, np.inf, 10 * np.log10(p_clean / np.where(p_resid == 0, 1.0, p_resid)))
