"""Exact integer linear algebra: Smith normal form, rank, integer kernels.

Matrices are lists of lists of Python ints (numpy object arrays are accepted
as input), so no value ever passes through floating point.
"""
from __future__ import annotations

from typing import List, Tuple

from .errors import InvalidParameter

Matrix = List[List[int]]


def as_int_matrix(A) -> Matrix:
    rows = [[int(v) for v in row] for row in A]
    for row, orig in zip(rows, A):
        for v, o in zip(row, orig):
            if v != o:
                raise InvalidParameter(f"non-integer entry {o!r}")
    return rows


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    m = len(B[0]) if B else 0
    return [[sum(a * B[t][j] for t, a in enumerate(row)) for j in range(m)] for row in A]


def int_det(A: Matrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U A V = D``, U and V unimodular and D
    diagonal with nonnegative entries ``d_1 | d_2 | ...``."""
    D = as_int_matrix(A)
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        for M in (D, U):
            M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for M in (D, V):
            for row in M:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
            rest = [(abs(D[i][t]), i, "r") for i in range(t + 1, m) if D[i][t]]
            rest += [(abs(D[t][j]), j, "c") for j in range(t + 1, n) if D[t][j]]
            if rest:
                _, idx, kind = min(rest)
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            U[t] = [-v for v in U[t]]
            D[t] = [-v for v in D[t]]
    return U, D, V


def rank(A) -> int:
    _, D, _ = smith_normal_form(A)
    return sum(1 for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i] != 0)


def hermite_rows(B: Matrix) -> Matrix:
    """Row Hermite normal form of a full-row-rank integer matrix."""
    H = [list(r) for r in B]
    if not H:
        return H
    n = len(H[0])
    top = 0
    for col in range(n):
        if top == len(H):
            break
        while True:
            nz = [i for i in range(top, len(H)) if H[i][col] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][col]))
            H[top], H[p] = H[p], H[top]
            done = True
            for i in range(top + 1, len(H)):
                if H[i][col]:
                    f = H[i][col] // H[top][col]
                    H[i] = [a - f * b for a, b in zip(H[i], H[top])]
                    if H[i][col]:
                        done = False
            if done:
                break
        if H[top][col] == 0:
            continue
        if H[top][col] < 0:
            H[top] = [-v for v in H[top]]
        for i in range(top):
            f = H[i][col] // H[top][col]
            if f:
                H[i] = [a - f * b for a, b in zip(H[i], H[top])]
        top += 1
    return H


def integer_kernel(E) -> Matrix:
    """Integer basis of ``ker(E) ∩ Z^k`` as a list of k-vectors (columns).

    Read off the Smith form: if ``U E V = D`` has rank r, the last k - r
    columns of V span the kernel lattice.  The basis is returned in row
    Hermite normal form so it does not depend on elimination order.
    """
    rows = as_int_matrix(E)
    k = len(rows[0]) if rows else 0
    _, D, V = smith_normal_form(rows)
    r = sum(1 for i in range(min(len(D), k)) if D[i][i] != 0)
    basis = [[V[i][j] for i in range(k)] for j in range(r, k)]
    return hermite_rows(basis)
