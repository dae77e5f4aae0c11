"""Spectrum of the flat torus (T^k, G) and the invariance thresholds.

Eigenfunctions are ``cos(2 pi <gamma, x>)`` and ``sin(2 pi <gamma, x>)`` for
``gamma`` in the dual lattice, with eigenvalue ``4 pi^2 |gamma|^2`` in the dual
metric ``G^{-1}``.  On p-forms every eigenvalue repeats with the binomial
factor C(k, p) because the flat coframe is parallel.
"""
from __future__ import annotations

import math
from typing import List, Tuple

from .errors import InvalidParameter
from .lattice import DEFAULT_NODE_BUDGET, GramMatrix, dual_gram, lattice_points, shortest_vector

FOUR_PI2 = 4.0 * math.pi ** 2
MERGE_RTOL = 1e-9

Spectrum = List[Tuple[float, int]]


def group_shells(norms2, rtol: float = MERGE_RTOL) -> List[Tuple[float, int]]:
    """Group sorted squared norms into shells ``(value, count)``.

    A value joins the current shell when it is within ``rtol`` (relative) of
    the shell's smallest member.
    """
    shells: List[List] = []
    for n in sorted(norms2):
        if shells and n - shells[-1][0] <= rtol * max(abs(n), abs(shells[-1][0])):
            shells[-1][1] += 1
        else:
            shells.append([n, 1])
    return [(v, c) for v, c in shells]


def dual_shells(G: GramMatrix, count: int, node_budget: int = DEFAULT_NODE_BUDGET):
    """First ``count`` shells ``(norm2, multiplicity)`` of the dual lattice,
    starting with the zero shell ``(0, 1)``."""
    D = dual_gram(G)
    if count == 1:
        return [(0.0, 1)]
    r2 = shortest_vector(D, node_budget=node_budget)[1] ** 2
    while True:
        # Enumerate slightly past r2; only shells strictly inside are complete.
        radius2 = r2 * (1.0 + 4 * MERGE_RTOL)
        pts = lattice_points(D, radius2, node_budget=node_budget)
        shells = [s for s in group_shells(n for _, n in pts) if s[0] * (1.0 + 2 * MERGE_RTOL) < radius2]
        if len(shells) >= count - 1:
            return [(0.0, 1)] + shells[: count - 1]
        r2 *= 4.0


def function_spectrum(G: GramMatrix, count: int, node_budget: int = DEFAULT_NODE_BUDGET) -> Spectrum:
    """First ``count`` distinct Laplace eigenvalues on functions with multiplicities."""
    if count < 1:
        raise InvalidParameter("count must be >= 1")
    return [(FOUR_PI2 * n, m) for n, m in dual_shells(G, count, node_budget=node_budget)]


def pform_spectrum(G: GramMatrix, p: int, count: int, node_budget: int = DEFAULT_NODE_BUDGET) -> Spectrum:
    """Hodge Laplacian spectrum on p-forms of the flat torus."""
    k = G.dim
    if not 0 <= p <= k:
        raise InvalidParameter(f"p must lie in [0, {k}], got {p}")
    factor = math.comb(k, p)
    return [(lam, m * factor) for lam, m in function_spectrum(G, count, node_budget=node_budget)]


def first_eigenvalue(G: GramMatrix) -> float:
    """lambda_{0,1}(T^k, G), the first nonzero function eigenvalue."""
    return function_spectrum(G, 2)[1][0]


def flow_threshold(T: float, X_sup_norm: float) -> float:
    """Eigenvalue bound ``(2 pi / (T |X|_inf))^2`` below which a T-periodic
    isometric flow with generator X acts trivially on eigenspaces."""
    if not (T > 0 and X_sup_norm > 0):
        raise InvalidParameter("T and X_sup_norm must be positive")
    return (2.0 * math.pi / (T * X_sup_norm)) ** 2


def invariance_threshold(G: GramMatrix, sup_f: float) -> float:
    """Eigenvalues below ``lambda_{0,1}(T^k, G) / sup f`` have torus-invariant
    eigenforms, when the fibre metrics are bounded by ``f * G``."""
    if not sup_f > 0:
        raise InvalidParameter("sup_f must be positive")
    return first_eigenvalue(G) / sup_f
