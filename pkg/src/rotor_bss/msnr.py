"""Maximum-SNR blind source separation.

The cost for one demixing row ``w`` is

    F(w) = 10 log10( w C w^T / w Cbar w^T ),   C = x x^T,  Cbar = d d^T,

with ``d = moving_average(x) - x``. The moving average acts as a prediction of
the clean signal, so ``d`` is the estimated noise. Stationary points of ``F``
are the generalized eigenvectors of ``C v = lam Cbar v``, hence the demixing
matrix is obtained in closed form with no iteration.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ValidationError
from .numeric import solve_gen_eig

__all__ = [
    "MsnrConfig",
    "DemixResult",
    "moving_average",
    "correlation_matrices",
    "snr_cost",
    "snr_cost_gradient",
    "compute_demixing",
    "separate",
    "DEFAULT_WINDOW",
]

DEFAULT_WINDOW = 5
PADDINGS = ("reflect",)


def _matrix(x) -> np.ndarray:
    """Accept a raw array or any signal container exposing ``.data``."""
    x = np.asarray(getattr(x, "data", x), dtype=float)
    if x.ndim == 1:
        x = x[np.newaxis, :]
    if x.ndim != 2:
        raise ValidationError(f"expected a (channels, samples) matrix, got shape {x.shape}")
    return x


@dataclass(frozen=True)
class MsnrConfig:
    window: int = DEFAULT_WINDOW
    padding: str = "reflect"

    def __post_init__(self):
        if self.padding not in PADDINGS:
            raise ValidationError(f"unknown padding {self.padding!r}; expected one of {PADDINGS}")
        if int(self.window) != self.window or self.window < 1:
            raise ValidationError(f"window must be a positive integer, got {self.window!r}")
        if self.window % 2 == 0:
            raise ValidationError(f"window must be odd for a centered average, got {self.window}")

    def check_length(self, n_samples):
        if self.window >= n_samples:
            raise ValidationError(f"window ({self.window}) must be shorter than the signal ({n_samples} samples)")


@dataclass(frozen=True)
class DemixResult:
    """Demixing matrix (unit-norm rows, descending eigenvalue order) and its diagnostics."""

    W: np.ndarray
    eigenvalues: np.ndarray
    cost_per_row: np.ndarray
    config: MsnrConfig


def moving_average(x, w: int) -> np.ndarray:
    """Centered length-``w`` moving average along the sample axis.

    Edges are padded by mirror reflection that repeats the edge sample
    (``[1, 2, 3] -> [.., 2, 1 | 1, 2, 3 | 3, 2, ..]``).
    """
    x = _matrix(x)
    MsnrConfig(w).check_length(x.shape[1])
    if w == 1:
        return x.copy()
    half = w // 2
    padded = np.pad(x, ((0, 0), (half, half)), mode="symmetric")
    windows = np.lib.stride_tricks.sliding_window_view(padded, w, axis=1)
    return windows.mean(axis=-1)


def correlation_matrices(x, cfg: MsnrConfig = MsnrConfig()):
    """Unnormalized ``(C, Cbar)`` for the observations ``x``."""
    x = _matrix(x)
    cfg.check_length(x.shape[1])
    d = moving_average(x, cfg.window) - x
    if not np.any(d):
        raise DegenerateInputError(
            "moving-average residual is identically zero; Cbar is singular and separation is undefined"
        )
    C = x @ x.T
    C_bar = d @ d.T
    # x @ x.T is symmetric up to rounding in the BLAS kernel
    return 0.5 * (C + C.T), 0.5 * (C_bar + C_bar.T)


def _quadratic_forms(W, C, C_bar):
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if W.shape[1] != C.shape[0]:
        raise ValidationError(f"W has {W.shape[1]} columns but C is {C.shape}")
    zero = np.flatnonzero(~np.any(W, axis=1))
    if zero.size:
        raise ValidationError(f"demixing row {int(zero[0])} is zero")
    V = np.einsum("ij,jk,ik->i", W, C, W)
    U = np.einsum("ij,jk,ik->i", W, C_bar, W)
    bad = np.flatnonzero(U <= 0)
    if bad.size:
        raise DegenerateInputError(f"row {int(bad[0])}: w Cbar w^T = {U[bad[0]]:.3e} is not positive")
    return W, V, U


def snr_cost(W, C, C_bar) -> np.ndarray:
    """Row-wise cost ``10 log10(w_i C w_i^T / w_i Cbar w_i^T)`` in dB."""
    _, V, U = _quadratic_forms(W, C, C_bar)
    return 10 * np.log10(V / U)


def snr_cost_gradient(W, C, C_bar) -> np.ndarray:
    """Gradient of :func:`snr_cost` with respect to each row of ``W``."""
    W, V, U = _quadratic_forms(W, C, C_bar)
    return (20 / np.log(10)) * ((W @ C) / V[:, None] - (W @ C_bar) / U[:, None])


def compute_demixing(x, cfg: MsnrConfig = MsnrConfig()) -> DemixResult:
    C, C_bar = correlation_matrices(x, cfg)
    result = solve_gen_eig(C, C_bar)
    W = result.eigenvectors / np.linalg.norm(result.eigenvectors, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cost = np.where(result.eigenvalues > 0, 10 * np.log10(np.abs(result.eigenvalues)), -np.inf)
    return DemixResult(W=W, eigenvalues=result.eigenvalues, cost_per_row=cost, config=cfg)


def separate(x, W) -> np.ndarray:
    """``y = W x``; row ``i`` of the result is extracted signal ``i``."""
    x = _matrix(x)
    W = np.atleast_2d(np.asarray(W, dtype=float))
    if W.shape[1] != x.shape[0]:
        raise ValidationError(f"W {W.shape} cannot demix {x.shape[0]} channels")
    return W @ x
