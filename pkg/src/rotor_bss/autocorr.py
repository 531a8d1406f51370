"""Time-delay autocorrelation denoising.

White noise concentrates its autocorrelation at zero lag while periodic
components keep a periodic autocorrelation. Dropping the first few lags and
keeping the rest gives a cleaner input for the separation stage. Because the
channel autocorrelation of a mixture of uncorrelated sources is (up to small
cross terms) a mixture of the source autocorrelations with gains ``a_ij**2``,
the lag-domain rows can be fed straight into a linear BSS method.

The signal mean is *not* removed: sources are zero-mean by construction, and a
large DC offset will dominate every lag.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .signals import MultichannelSignal, _frozen

__all__ = ["AutocorrConfig", "LagSignal", "autocorrelation", "denoise", "DEFAULT_DROP_LAG"]

DEFAULT_DROP_LAG = 10
ESTIMATORS = ("biased",)


@dataclass(frozen=True)
class AutocorrConfig:
    """Retained lag window ``[drop_lag, max_lag)``.

    ``max_lag=None`` resolves to ``N // 2`` of whatever signal it is applied to.
    """

    max_lag: Optional[int] = None
    drop_lag: int = DEFAULT_DROP_LAG
    estimator: str = "biased"

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ValidationError(f"unknown estimator {self.estimator!r}; expected one of {ESTIMATORS}")
        if self.drop_lag < 0:
            raise ValidationError(f"drop_lag must be >= 0, got {self.drop_lag}")
        if self.max_lag is not None and self.drop_lag >= self.max_lag:
            raise ValidationError(f"drop_lag ({self.drop_lag}) must be smaller than max_lag ({self.max_lag})")

    def resolve(self, n_samples: int) -> "AutocorrConfig":
        max_lag = n_samples // 2 if self.max_lag is None else self.max_lag
        cfg = AutocorrConfig(max_lag, self.drop_lag, self.estimator)
        if max_lag >= n_samples:
            raise ValidationError(f"max_lag ({max_lag}) must be smaller than the signal length ({n_samples})")
        if max_lag - self.drop_lag < 2:
            raise ValidationError(f"retained lag window [{self.drop_lag}, {max_lag}) needs at least 2 lags")
        return cfg


@dataclass(frozen=True)
class LagSignal:
    """Per-channel autocorrelation over lags ``start_lag .. start_lag + lags - 1``."""

    data: np.ndarray
    start_lag: int
    sample_rate: float = 1.0

    def __post_init__(self):
        data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if data.ndim != 2 or data.shape[1] < 2:
            raise ValidationError(f"lag signal needs shape (channels, >=2 lags), got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValidationError("lag signal contains non-finite values")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def lags(self) -> int:
        return self.data.shape[1]

    def lag_axis(self) -> np.ndarray:
        return np.arange(self.start_lag, self.start_lag + self.lags)


def autocorrelation(x: MultichannelSignal, max_lag: int) -> np.ndarray:
    """Biased autocorrelation estimate for lags ``0 .. max_lag-1``.

    ``R[i, tau] = (1/N) * sum_k x[i, k] * x[i, k + tau]``. Returns an array of
    shape ``(channels, max_lag)``; ``R[:, 0]`` is the mean power.
    """
    n = x.samples
    if not 1 <= max_lag < n:
        raise ValidationError(f"max_lag must satisfy 1 <= max_lag < N={n}, got {max_lag}")
    data = x.data
    out = np.empty((x.channels, max_lag))
    for i, row in enumerate(data):
        for tau in range(max_lag):
            out[i, tau] = np.dot(row[: n - tau], row[tau:])
    return out / n


def denoise(x: MultichannelSignal, cfg: AutocorrConfig = AutocorrConfig()) -> LagSignal:
    """Autocorrelate each channel and keep lags ``[drop_lag, max_lag)``."""
    cfg = cfg.resolve(x.samples)
    r = autocorrelation(x, cfg.max_lag)
    return LagSignal(r[:, cfg.drop_lag :], start_lag=cfg.drop_lag, sample_rate=x.sample_rate)
