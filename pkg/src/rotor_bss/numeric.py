"""Small dense symmetric eigensolvers.

Everything here targets tiny orders (n <= 8): cyclic Jacobi for the standard
symmetric problem, and Cholesky reduction for the symmetric-definite pencil
``C v = lam * Cbar v``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DegenerateInputError, ValidationError

__all__ = [
    "GenEigResult",
    "as_symmetric",
    "sym_eig",
    "cholesky",
    "solve_lower",
    "solve_gen_eig",
]

SYM_RTOL = 1e-12
JACOBI_TOL = 1e-14
MAX_SWEEPS = 100


def as_symmetric(M, name="matrix") -> np.ndarray:
    """Validate a square, finite, symmetric matrix and return it as float array."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    scale = np.max(np.abs(M)) if M.size else 0.0
    if np.max(np.abs(M - M.T), initial=0.0) > SYM_RTOL * scale:
        raise ValidationError(f"{name} is not symmetric")
    return M


def _sign_fix(vectors):
    """Flip each row so its first non-negligible component is positive."""
    out = vectors.copy()
    for i, v in enumerate(out):
        nz = np.flatnonzero(np.abs(v) > 1e-14 * np.max(np.abs(v)))
        if nz.size and v[nz[0]] < 0:
            out[i] = -v
    return out


def sym_eig(M):
    """Eigen-decompose a symmetric matrix with cyclic Jacobi rotations.

    Returns ``(eigenvalues, Q)`` with eigenvalues in descending order and the
    matching orthonormal eigenvectors in the *columns* of ``Q`` so that
    ``M = Q diag(eigenvalues) Q.T``. Each eigenvector's first nonzero
    component is made positive.
    """
    a = as_symmetric(M).copy()
    n = a.shape[0]
    q = np.eye(n)
    norm = np.linalg.norm(a)
    tol = JACOBI_TOL * norm

    mask = ~np.eye(n, dtype=bool)

    def off(m):
        return np.linalg.norm(m[mask])

    for _ in range(MAX_SWEEPS):
        if off(a) <= tol:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # a <- J^T a J restricted to rows/cols p, r
                ap = a[:, p].copy()
                ar = a[:, r].copy()
                a[:, p] = c * ap - s * ar
                a[:, r] = s * ap + c * ar
                ap = a[p, :].copy()
                ar = a[r, :].copy()
                a[p, :] = c * ap - s * ar
                a[r, :] = s * ap + c * ar
                a[p, r] = a[r, p] = 0.0
                qp = q[:, p].copy()
                qr = q[:, r].copy()
                q[:, p] = c * qp - s * qr
                q[:, r] = s * qp + c * qr
    else:
        residual = off(a)
        if residual > tol:
            raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps", residual)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    vectors = _sign_fix(q[:, order].T)
    return eigenvalues[order], vectors.T


def cholesky(M) -> np.ndarray:
    """Lower-triangular ``L`` with ``M = L L^T``; raises if ``M`` is not PD."""
    M = as_symmetric(M)
    n = M.shape[0]
    L = np.zeros_like(M)
    for j in range(n):
        pivot = M[j, j] - np.dot(L[j, :j], L[j, :j])
        if not pivot > 0:
            raise DegenerateInputError(f"matrix is not positive definite (pivot {j} = {pivot:.3e})")
        L[j, j] = np.sqrt(pivot)
        for i in range(j + 1, n):
            L[i, j] = (M[i, j] - np.dot(L[i, :j], L[j, :j])) / L[j, j]
    return L


def solve_lower(L, B) -> np.ndarray:
    """Forward substitution for ``L X = B`` with ``L`` lower triangular."""
    B = np.asarray(B, dtype=float)
    X = np.zeros_like(B)
    for i in range(L.shape[0]):
        X[i] = (B[i] - L[i, :i] @ X[:i]) / L[i, i]
    return X


@dataclass(frozen=True)
class GenEigResult:
    """Solution of ``C v = lam Cbar v``.

    ``eigenvectors[i]`` is the unit-norm vector paired with ``eigenvalues[i]``;
    eigenvalues are descending. ``residuals[i] = ||C v_i - lam_i Cbar v_i||``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray


def solve_gen_eig(C, C_bar) -> GenEigResult:
    """Symmetric-definite generalized eigenproblem via Cholesky reduction.

    Factor ``C_bar = L L^T``, diagonalize ``L^-1 C L^-T`` and map back
    ``v = L^-T u``. ``C_bar`` must be positive definite; this is checked on its
    smallest eigenvalue against ``1e-12 * ||C_bar||_F``.
    """
    C = as_symmetric(C, "C")
    C_bar = as_symmetric(C_bar, "C_bar")
    if C.shape != C_bar.shape:
        raise ValidationError(f"C {C.shape} and C_bar {C_bar.shape} differ in shape")

    bar_eigs, _ = sym_eig(C_bar)
    floor = 1e-12 * np.linalg.norm(C_bar)
    if not bar_eigs[-1] > floor:
        raise DegenerateInputError(
            f"C_bar is not positive definite: smallest eigenvalue {bar_eigs[-1]:.6e} <= {floor:.3e}; "
            "the denoising window may be degenerate or channels may be constant/duplicated"
        )

    L = cholesky(C_bar)
    Linv_C = solve_lower(L, C)
    reduced = solve_lower(L, Linv_C.T)
    reduced = 0.5 * (reduced + reduced.T)
    eigenvalues, U = sym_eig(reduced)

    V = solve_lower(L, np.eye(L.shape[0])).T @ U
    V = V / np.linalg.norm(V, axis=0)
    vectors = _sign_fix(V.T)
    residuals = np.array(
        [np.linalg.norm(C @ v - lam * (C_bar @ v)) for lam, v in zip(eigenvalues, vectors)]
    )
    return GenEigResult(eigenvalues, vectors, residuals)
