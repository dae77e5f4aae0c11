"""Flat-torus lattice geometry on R^k / Z^k.

A flat metric on the torus is a :class:`GramMatrix` ``G`` of inner products of
the standard lattice basis.  Alongside the entries we always keep a factor
``L`` with ``G = L.T @ L``; norms, volumes and dual metrics are computed from
the factor, which keeps strongly collapsed metrics (aspect ratio ~1e6) accurate
where the squared entries alone would lose half the significant digits.
"""
from __future__ import annotations

from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DegenerateMetric, InvalidParameter

SYMMETRY_RTOL = 1e-12
MAX_CONDITION = 1e14
DEFAULT_NODE_BUDGET = 10**8
# Relative slack when pruning the enumeration tree, so that float error in the
# triangular recurrences never discards a true minimiser.
PRUNE_RTOL = 1e-7
# Two lattice vectors whose squared norms agree to this relative tolerance are
# treated as tied and resolved by `tie_key`.
TIE_RTOL = 1e-12


class GramMatrix:
    """Symmetric positive-definite Gram matrix of the lattice Z^k.

    Args:
        entries: k x k symmetric matrix (length^2 units).
        factor: optional k x k matrix ``L`` with ``entries == L.T @ L``.  When
            omitted the upper Cholesky factor is used.

    Raises:
        InvalidParameter: if the matrix is not square, not symmetric to
            ``SYMMETRY_RTOL`` or not positive definite.
    """

    __slots__ = ("entries", "factor")

    def __init__(self, entries, factor=None):
        g = np.array(entries, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise InvalidParameter(f"Gram matrix must be square and nonempty, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InvalidParameter("Gram matrix has non-finite entries")
        scale = np.max(np.abs(g))
        if np.max(np.abs(g - g.T)) > SYMMETRY_RTOL * scale:
            raise InvalidParameter("Gram matrix is not symmetric")
        g = 0.5 * (g + g.T)
        if factor is None:
            try:
                factor = np.linalg.cholesky(g).T
            except np.linalg.LinAlgError:
                raise InvalidParameter("Gram matrix is not positive definite") from None
            if np.any(np.diag(factor) <= 0):
                raise InvalidParameter("Gram matrix is not positive definite")
        else:
            factor = np.array(factor, dtype=float)
            if factor.shape != g.shape:
                raise InvalidParameter("factor shape does not match Gram matrix")
        g.flags.writeable = False
        factor.flags.writeable = False
        object.__setattr__(self, "entries", g)
        object.__setattr__(self, "factor", factor)

    def __setattr__(self, name, value):
        raise AttributeError("GramMatrix is immutable")

    @classmethod
    def from_factor(cls, factor) -> "GramMatrix":
        """Build ``G = L.T @ L`` from a nonsingular factor ``L``."""
        L = np.array(factor, dtype=float)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise InvalidParameter("factor must be square")
        s = np.linalg.svd(L, compute_uv=False)
        if not np.all(np.isfinite(s)) or s[-1] <= 0:
            raise InvalidParameter("factor is singular")
        return cls(L.T @ L, factor=L)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm2(self, coords) -> float:
        """Squared length ``v^T G v`` of an integer coordinate vector."""
        w = self.factor @ np.asarray(coords, dtype=float)
        return float(w @ w)

    def scaled(self, c2: float) -> "GramMatrix":
        """The Gram matrix ``c2 * G`` (lengths multiplied by sqrt(c2))."""
        if not c2 > 0:
            raise InvalidParameter("scale factor must be positive")
        return GramMatrix(c2 * self.entries, factor=np.sqrt(c2) * self.factor)

    def condition_number(self) -> float:
        s = np.linalg.svd(self.factor, compute_uv=False)
        return float((s[0] / s[-1]) ** 2)

    def triangular(self) -> np.ndarray:
        """Upper-triangular ``R`` with positive diagonal and ``G = R.T @ R``."""
        # QR of L (rather than Cholesky of G) keeps the accuracy of the factor.
        R = np.linalg.qr(self.factor, mode="r")
        signs = np.where(np.diag(R) < 0, -1.0, 1.0)
        return signs[:, None] * R

    def __repr__(self):
        return f"GramMatrix({self.entries.tolist()!r})"


def volume(G: GramMatrix) -> float:
    """Volume sqrt(det G) of the flat torus R^k / Z^k under ``G``."""
    # Column-pivoting-free QR of L^T is accurate under row scaling of L, which
    # is exactly the shape of a collapsed metric.
    R = np.linalg.qr(G.factor.T, mode="r")
    return float(np.prod(np.abs(np.diag(R))))


def dual_gram(G: GramMatrix) -> GramMatrix:
    """Gram matrix ``G^{-1}`` of the dual lattice.

    Raises:
        DegenerateMetric: if the condition number of ``G`` exceeds 1e14.
    """
    cond = G.condition_number()
    if not cond <= MAX_CONDITION:
        raise DegenerateMetric(f"condition number {cond:.3g} exceeds {MAX_CONDITION:.0e}")
    Linv_T = np.linalg.inv(G.factor).T
    entries = np.linalg.inv(G.entries)
    return GramMatrix(0.5 * (entries + entries.T), factor=Linv_T)


def sign_normalize(coords) -> Tuple[int, ...]:
    """Flip the sign so that the first nonzero coordinate is positive."""
    v = tuple(int(c) for c in coords)
    for c in v:
        if c != 0:
            return v if c > 0 else tuple(-x for x in v)
    return v


def tie_key(coords) -> tuple:
    """Ordering used to pick one vector among equal-norm minimisers.

    Vectors are compared coordinate by coordinate, a nonzero entry ranking
    before a zero one and smaller values ranking first otherwise, so that the
    identity lattice yields ``(1, 0, ..., 0)``.
    """
    return tuple((c == 0, c) for c in coords)


def _pick(G: GramMatrix, candidates) -> Tuple[Tuple[int, ...], float]:
    scored = {}
    for v in candidates:
        v = sign_normalize(v)
        if any(v) and v not in scored:
            scored[v] = G.norm2(v)
    best = min(scored.values())
    ties = [v for v, n in scored.items() if n <= best * (1.0 + TIE_RTOL)]
    v = min(ties, key=tie_key)
    return v, float(np.sqrt(scored[v]))


def enumerate_lattice(
    R: np.ndarray,
    bound2: float,
    visit: Callable[[list, float], Optional[float]],
    node_budget: int = DEFAULT_NODE_BUDGET,
    top_nonnegative: bool = False,
) -> int:
    """Fincke-Pohst enumeration of integer x with ``|R x|^2 <= bound2``.

    Coordinates are visited from the last to the first, in Schnorr-Euchner
    zig-zag order around each conditional centre.  ``visit(x, partial)`` is
    called for every nonzero leaf; if it returns a number, the bound is
    replaced by it (radius shrinking).

    Returns:
        The number of tree nodes processed.

    Raises:
        DegenerateMetric: once more than ``node_budget`` nodes are processed.
    """
    k = R.shape[0]
    r = R.tolist()
    diag = [r[i][i] for i in range(k)]
    x = [0] * k
    state = {"bound": float(bound2), "nodes": 0}

    def level(i: int, partial: float) -> None:
        rii = diag[i]
        s = 0.0
        row = r[i]
        for j in range(i + 1, k):
            s += row[j] * x[j]
        center = -s / rii
        up = int(np.floor(center + 0.5))
        down = up - 1
        up_alive = True
        down_alive = not (top_nonnegative and i == k - 1 and down < 0)
        while up_alive or down_alive:
            if up_alive and (not down_alive or up - center <= center - down):
                xi = up
                up += 1
                side = "up"
            else:
                xi = down
                down -= 1
                side = "down"
            state["nodes"] += 1
            if state["nodes"] > node_budget:
                raise DegenerateMetric(f"enumeration exceeded node budget {node_budget}")
            d = rii * (xi - center)
            p = partial + d * d
            if p > state["bound"] * (1.0 + PRUNE_RTOL):
                if side == "up":
                    up_alive = False
                else:
                    down_alive = False
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    new = visit(list(x), p)
                    if new is not None:
                        state["bound"] = min(state["bound"], new)
            else:
                level(i - 1, p)
        x[i] = 0

    level(k - 1, 0.0)
    return state["nodes"]


def shortest_vector(
    G: GramMatrix, node_budget: int = DEFAULT_NODE_BUDGET
) -> Tuple[Tuple[int, ...], float]:
    """Shortest nonzero lattice vector of Z^k under ``G``.

    Returns:
        ``(coords, norm)`` with the deterministic tie-break of `tie_key`
        among sign-normalised minimisers.

    Raises:
        DegenerateMetric: if the enumeration exceeds ``node_budget`` nodes.
    """
    k = G.dim
    R = G.triangular()
    start = min(G.norm2(np.eye(k, dtype=int)[i]) for i in range(k))
    found = []

    def visit(x, partial):
        n = G.norm2(x)
        found.append((n, tuple(x)))
        return n

    enumerate_lattice(R, start, visit, node_budget=node_budget, top_nonnegative=True)
    if not found:  # pragma: no cover - the best basis vector is always inside
        raise DegenerateMetric("enumeration found no lattice vector")
    best = min(n for n, _ in found)
    return _pick(G, [v for n, v in found if n <= best * (1.0 + PRUNE_RTOL)])


def shortest_vector_oracle(G: GramMatrix, box: int) -> Tuple[Tuple[int, ...], float]:
    """Exhaustive scan of all nonzero coordinates with ``|x_i| <= box``."""
    if box < 1:
        raise InvalidParameter("box must be >= 1")
    k = G.dim
    L = G.factor
    tol = 1.0 + 1e-6
    axis = np.arange(-box, box + 1, dtype=float)
    # Chunk over the first coordinate; only x_0 >= 0 is needed up to sign.
    if k > 1:
        rest = np.stack(np.meshgrid(*([axis] * (k - 1)), indexing="ij"), axis=-1).reshape(-1, k - 1)
    else:
        rest = np.zeros((1, 0))
    w_rest = rest @ L[:, 1:].T
    best = np.inf
    keep = []
    for x0 in range(0, box + 1):
        w = w_rest + float(x0) * L[:, 0]
        n = np.einsum("ij,ij->i", w, w)
        if x0 == 0:
            n[np.all(rest == 0, axis=1)] = np.inf
        m = n.min()
        if m <= best * tol:
            best = min(best, m)
            sel = rest[n <= best * tol]
            keep.append(np.hstack([np.full((sel.shape[0], 1), float(x0)), sel]))
    cands = np.vstack(keep)
    w = cands @ L.T
    n = np.einsum("ij,ij->i", w, w)
    cands = cands[n <= best * tol]
    return _pick(G, cands.astype(np.int64).tolist())


def lattice_points(G: GramMatrix, radius2: float, node_budget: int = DEFAULT_NODE_BUDGET):
    """All nonzero ``(coords, norm2)`` with ``norm2 <= radius2``, both signs."""
    pts = []

    def visit(x, partial):
        n = G.norm2(x)
        if n <= radius2:
            pts.append((tuple(x), n))
        return None

    enumerate_lattice(G.triangular(), radius2, visit, node_budget=node_budget)
    return pts


def injectivity_radius(G: GramMatrix, node_budget: int = DEFAULT_NODE_BUDGET) -> float:
    """Half the length of the shortest nonzero lattice vector."""
    return shortest_vector(G, node_budget=node_budget)[1] / 2.0


def collapse_gram(direction, eps: float) -> GramMatrix:
    """Metric making ``(X_1 / eps, X_2, ..., X_k)`` orthonormal.

    ``direction`` is anything with a ``frame`` attribute whose rows are the
    orthonormal frame ``X_1..X_k`` (see :class:`~collapse_lab.diophantine.CollapseDirection`).
    The result is ``Q^T diag(eps^2, 1, ..., 1) Q`` with ``Q = frame``.
    """
    if not (np.isfinite(eps) and 0 < eps <= 1):
        raise InvalidParameter(f"eps must lie in (0, 1], got {eps!r}")
    Q = np.asarray(direction.frame, dtype=float)
    scale = np.ones(Q.shape[0])
    scale[0] = eps
    L = scale[:, None] * Q
    return GramMatrix(L.T @ L, factor=L)
