"""The Euler map of a principal torus bundle and the spectral bounds built on it.

The map ``e`` sends the integral dual basis of the fibre Lie algebra to
integral classes in H^2(N).  It is stored as an integer matrix ``E`` (one
column per basis element, coordinates in an integral basis of H^2(N, Z) mod
torsion) together with the L^2 Gram matrix ``G`` of the harmonic
representatives of that basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import InvalidParameter, NotApplicable, NotInjective
from .jacobi import eigvalsh, lambda_max_sym, lambda_min_sym
from .lattice import GramMatrix, dual_gram, shortest_vector, volume
from .smith import as_int_matrix, hermite_rows, smith_normal_form


@dataclass(frozen=True, eq=False)
class EulerMap:
    """Integer Euler map ``E`` (b2 x k) against the harmonic Gram ``G`` (b2 x b2)."""

    E: tuple
    G: GramMatrix
    k: int
    rank: int = field(init=False)

    def __init__(self, E, G, k: Optional[int] = None):
        rows = as_int_matrix(E)
        if not isinstance(G, GramMatrix):
            G = GramMatrix(G)
        b2 = G.dim
        if len(rows) != b2:
            raise InvalidParameter(f"E has {len(rows)} rows but G is {b2}x{b2}")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise InvalidParameter("E rows have unequal lengths")
        width = widths.pop() if widths else k
        if k is not None and width != k:
            raise InvalidParameter(f"E has {width} columns, expected k={k}")
        if not width:
            raise InvalidParameter("fibre dimension k must be >= 1")
        object.__setattr__(self, "E", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "k", width)
        _, D, _ = smith_normal_form(rows)
        r = sum(1 for i in range(min(len(D), width)) if D[i][i] != 0)
        object.__setattr__(self, "rank", r)

    @property
    def b2(self) -> int:
        return self.G.dim

    @property
    def injective(self) -> bool:
        return self.rank == self.k

    def matrix(self) -> np.ndarray:
        return np.array(self.E, dtype=float).reshape(self.b2, self.k)

    def images(self, W: np.ndarray) -> np.ndarray:
        """``L_G E W``: images of the columns of W in G-orthonormal coordinates."""
        return self.G.factor @ self.matrix() @ W


@dataclass(frozen=True)
class BaseManifoldData:
    """Scalar data of the base (N, h) that the bounds depend on."""

    vol_N: float
    lambda01_N: float
    lambda11_N: float
    betti: tuple = (1,)
    curvature_bound: float = 1.0
    diameter: float = 1.0

    def __post_init__(self):
        for name in ("vol_N", "lambda01_N", "lambda11_N", "curvature_bound", "diameter"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InvalidParameter(f"{name} must be positive, got {v!r}")
        betti = tuple(int(b) for b in self.betti)
        if not betti or betti[0] != 1 or any(b < 0 for b in betti):
            raise InvalidParameter("betti must be nonnegative with betti[0] == 1")
        object.__setattr__(self, "betti", betti)


def _gram(B: np.ndarray) -> np.ndarray:
    M = B.T @ B
    return 0.5 * (M + M.T)


def _gram_det_sqrt(B: np.ndarray) -> float:
    """sqrt(det(B^T B)) via QR, accurate under column scaling."""
    if B.shape[1] == 0:
        return 1.0
    R = np.linalg.qr(B, mode="r")
    return float(np.prod(np.abs(np.diag(R))))


def gram_ee(m: EulerMap) -> np.ndarray:
    """Matrix ``E^T G E`` of e*e in the integral basis."""
    return _gram(m.images(np.eye(m.k)))


def det_bound(m: EulerMap) -> float:
    """Lower bound ``det(e*e) / lambda_max(e*e)^(k-1)`` on the first eigenvalue of e*e.

    Raises:
        NotInjective: if E has a kernel; use :func:`restricted_bound` instead.
    """
    if not m.injective:
        raise NotInjective(f"rank {m.rank} < k = {m.k}")
    w = eigvalsh(gram_ee(m))
    lam_max = w[-1]
    det = _gram_det_sqrt(m.images(np.eye(m.k))) ** 2
    return float(det / lam_max ** (m.k - 1))


def kernel_split(m: EulerMap):
    """Unimodular basis split of Z^k as ``(kernel, complement)`` column lists."""
    rows = [list(r) for r in m.E] or [[0] * m.k]
    _, D, V = smith_normal_form(rows)
    r = m.rank
    cols = [[V[i][j] for i in range(m.k)] for j in range(m.k)]
    return cols[r:], cols[:r]


def restricted_bound(m: EulerMap, fiber_G: GramMatrix) -> float:
    """Lower bound on the first eigenvalue of e*e restricted to (ker e)^perp.

    Computes ``(Det A)^2 / lambda_max(A^T A)^(k-l-1)`` with
    ``Det A = Det A' * Det P1 / Det P``: ``Det A'`` is the covolume of the
    image of a complement of the kernel lattice, ``Det P = 1 / vol(T^k)`` and
    ``Det P1 = 1 / vol(T^k / T^{k-l})`` for the quotient metric.  The fibre
    metric enters through its dual on the Lie coalgebra.

    Raises:
        NotApplicable: if e is the zero map (l = k).
    """
    if not isinstance(fiber_G, GramMatrix):
        fiber_G = GramMatrix(fiber_G)
    if fiber_G.dim != m.k:
        raise InvalidParameter(f"fibre Gram is {fiber_G.dim}x{fiber_G.dim}, expected k={m.k}")
    l = m.k - m.rank
    if l == m.k:
        raise NotApplicable("e is the zero map")
    kern, comp = kernel_split(m)
    K = np.array(kern, dtype=float).T.reshape(m.k, l)
    C = np.array(comp, dtype=float).T.reshape(m.k, m.k - l)
    dual_factor = np.linalg.inv(fiber_G.factor).T
    det_P = 1.0 / volume(fiber_G)
    det_P1 = _gram_det_sqrt(dual_factor @ K)
    det_A_prime = _gram_det_sqrt(m.images(C))
    det_A = det_A_prime * det_P1 / det_P
    # e*e in an orthonormal basis of the coalgebra: W = L_f^T.
    lam_max = lambda_max_sym(_gram(m.images(fiber_G.factor.T)))
    return float(det_A ** 2 / lam_max ** (m.k - l - 1))


def restricted_eigenvalues(m: EulerMap, fiber_G: GramMatrix) -> np.ndarray:
    """Nonzero spectrum of e*e for the fibre metric ``fiber_G``: the eigenvalues
    on (ker e)^perp, ascending."""
    w = eigvalsh(_gram(m.images(fiber_G.factor.T)))
    return w[m.k - m.rank:]


def rho(G: GramMatrix) -> float:
    """Minimum L^2 norm of a nonzero integral harmonic 2-form."""
    return shortest_vector(G)[1]


def kunneth(betti_a: Sequence[int], betti_b: Sequence[int]) -> List[int]:
    """Betti numbers of a product: ``b_p(A x B) = sum_i b_i(A) b_{p-i}(B)``."""
    a = [int(v) for v in betti_a]
    b = [int(v) for v in betti_b]
    if not a or not b or a[0] != 1 or b[0] != 1 or min(a + b) < 0:
        raise InvalidParameter("Betti vectors must be nonnegative with leading 1")
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def kunneth_power(betti: Sequence[int], n: int) -> List[int]:
    out = [1]
    for _ in range(n):
        out = kunneth(out, betti)
    return out


SPHERE = {1: (1, 1), 2: (1, 0, 1), 3: (1, 0, 0, 1)}


def kernel_basis(m: EulerMap) -> List[List[int]]:
    """Deterministic (Hermite-normalised) integer basis of ker e."""
    kern, _ = kernel_split(m)
    return hermite_rows(kern)


__all__ = [
    "BaseManifoldData",
    "EulerMap",
    "SPHERE",
    "det_bound",
    "gram_ee",
    "kernel_basis",
    "kunneth",
    "kunneth_power",
    "lambda_min_sym",
    "restricted_bound",
    "restricted_eigenvalues",
    "rho",
]
