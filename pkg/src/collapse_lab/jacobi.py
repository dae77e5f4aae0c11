"""Cyclic Jacobi eigensolver for small dense symmetric matrices.

The off-diagonal test is relative to the diagonal, ``|a_ij| <= tol *
sqrt(|a_ii a_jj|)``, so for positive definite matrices of the form D A D
(well-conditioned A, arbitrary diagonal scaling D) tiny eigenvalues come out
with full relative accuracy.  Collapsed fibre metrics produce exactly that
shape.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidParameter

TOL = 1e-15
MAX_SWEEPS = 60


def jacobi_eigh(M, tol: float = TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigenvalues (ascending) and eigenvectors (columns) of symmetric ``M``."""
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameter("matrix must be square")
    n = A.shape[0]
    if n and np.max(np.abs(A - A.T)) > 1e-12 * max(np.max(np.abs(A)), 1e-300):
        raise InvalidParameter("matrix must be symmetric")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0 or abs(apq) <= tol * np.sqrt(abs(A[p, p] * A[q, q])):
                    continue
                rotated = True
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                J = np.array([[c, s], [-s, c]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ J
        if not rotated:
            break
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigvalsh(M) -> np.ndarray:
    return jacobi_eigh(M)[0]


def lambda_min_sym(M) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    return float(eigvalsh(M)[0])


def lambda_max_sym(M) -> float:
    return float(eigvalsh(M)[-1])
