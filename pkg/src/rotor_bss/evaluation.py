"""Correlation-coefficient scoring with permutation and sign resolution."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["EvalReport", "corr_coeff", "match_sources", "MAX_EXHAUSTIVE"]

MAX_EXHAUSTIVE = 8


@dataclass(frozen=True)
class EvalReport:
    """``corr_matrix[i, j]`` is the signed coefficient of estimate ``i`` vs reference ``j``."""

    corr_matrix: np.ndarray
    permutation: tuple
    matched_coeffs: np.ndarray
    mean_matched: float

    def to_dict(self):
        return {
            "corr_matrix": self.corr_matrix.tolist(),
            "permutation": list(self.permutation),
            "matched_coeffs": self.matched_coeffs.tolist(),
            "mean_matched": float(self.mean_matched),
        }


def corr_coeff(a, b) -> float:
    """Pearson coefficient ``cov(a, b) / sqrt(cov(a, a) cov(b, b))``."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size != b.size:
        raise ValidationError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise ValidationError("need at least 2 samples")
    da = a - a.mean()
    db = b - b.mean()
    scale = a.size - 1
    caa = np.dot(da, da) / scale
    cbb = np.dot(db, db) / scale
    if caa == 0 or cbb == 0:
        raise ValidationError("zero-variance input; correlation coefficient is undefined")
    r = (np.dot(da, db) / scale) / np.sqrt(caa * cbb)
    return float(np.clip(r, -1.0, 1.0))


def match_sources(estimated, reference) -> EvalReport:
    """Score each estimate against its best-matching reference channel.

    The assignment maximizes the sum of ``|coefficient|`` over all ``n!``
    permutations, which resolves the order and sign ambiguity of BSS outputs.
    """
    est = np.atleast_2d(np.asarray(getattr(estimated, "data", estimated), dtype=float))
    ref = np.atleast_2d(np.asarray(getattr(reference, "data", reference), dtype=float))
    if est.shape != ref.shape:
        raise ValidationError(f"estimated {est.shape} and reference {ref.shape} differ in shape")
    n = est.shape[0]
    if n > MAX_EXHAUSTIVE:
        raise ValidationError(f"exhaustive matching supports at most {MAX_EXHAUSTIVE} channels, got {n}")
    for label, m in (("estimated", est), ("reference", ref)):
        flat = np.flatnonzero(np.ptp(m, axis=1) == 0)
        if flat.size:
            raise ValidationError(f"{label} channel {int(flat[0])} has zero variance")

    corr = np.array([[corr_coeff(est[i], ref[j]) for j in range(n)] for i in range(n)])
    mag = np.abs(corr)
    best = max(
        itertools.permutations(range(n)),
        key=lambda p: sum(mag[i, p[i]] for i in range(n)),
    )
    matched = np.array([mag[i, best[i]] for i in range(n)])
    return EvalReport(corr, tuple(best), matched, float(matched.mean()))
