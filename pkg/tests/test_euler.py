import math

import numpy as np
import pytest
import sympy
from scipy.linalg import null_space

from collapse_lab.errors import InvalidParameter, NotApplicable, NotInjective
from collapse_lab.euler import (
    SPHERE,
    BaseManifoldData,
    EulerMap,
    det_bound,
    gram_ee,
    kernel_basis,
    kunneth,
    kunneth_power,
    restricted_bound,
    restricted_eigenvalues,
    rho,
)
from collapse_lab.jacobi import eigvalsh, jacobi_eigh, lambda_max_sym, lambda_min_sym
from collapse_lab.lattice import GramMatrix, shortest_vector_oracle
from collapse_lab.smith import hermite_rows, int_det, integer_kernel, matmul, rank, smith_normal_form

from conftest import make_spd


def cubic_roots_sym(M):
    """Eigenvalues of a symmetric 3x3 matrix by the trigonometric cubic formula."""
    M = np.asarray(M, dtype=float)
    q = np.trace(M) / 3
    B = M - q * np.eye(3)
    p = math.sqrt(np.sum(B * B) / 6)
    r = np.linalg.det(B / p) / 2
    phi = math.acos(max(-1.0, min(1.0, r))) / 3
    e1 = q + 2 * p * math.cos(phi)
    e3 = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
    return sorted([e1, 3 * q - e1 - e3, e3])


class TestJacobi:
    def test_trivial(self):
        assert lambda_min_sym(np.diag([4.0, 9.0])) == 4.0
        assert lambda_min_sym(np.eye(2)) == 1.0
        assert lambda_max_sym(np.diag([4.0, 9.0])) == 9.0

    def test_quadratic_formula(self, rng):
        for _ in range(50):
            a, b, c = rng.standard_normal(3)
            disc = math.sqrt((a - c) ** 2 + 4 * b * b)
            want = [(a + c - disc) / 2, (a + c + disc) / 2]
            assert np.allclose(eigvalsh([[a, b], [b, c]]), want, rtol=1e-12, atol=1e-14)

    def test_cubic_formula(self, rng):
        for _ in range(100):
            A = rng.standard_normal((3, 3))
            M = A + A.T
            assert np.allclose(eigvalsh(M), cubic_roots_sym(M), rtol=1e-9, atol=1e-12)

    def test_eigenvectors(self, rng):
        A = rng.standard_normal((5, 5))
        M = A + A.T
        w, V = jacobi_eigh(M)
        assert np.allclose(M @ V, V * w, atol=1e-12)
        assert np.allclose(V.T @ V, np.eye(5), atol=1e-13)

    def test_relative_accuracy_graded(self):
        # D A D with D spanning 12 orders: tiny eigenvalue resolved relatively.
        D = np.diag([1e-6, 1.0])
        M = D @ np.array([[2.0, 1.0], [1.0, 2.0]]) @ D
        w = eigvalsh(M)
        exact = sympy.Matrix([[sympy.Rational(2, 10 ** 12), sympy.Rational(1, 10 ** 6)],
                              [sympy.Rational(1, 10 ** 6), 2]]).eigenvals()
        lo = min(float(sympy.N(v, 30)) for v in exact)
        assert w[0] == pytest.approx(lo, rel=1e-12)


class TestSmith:
    def test_decomposition_and_reconstruction(self, rng):
        for _ in range(100):
            m, k = rng.integers(1, 5, size=2)
            E = rng.integers(-6, 7, size=(m, k)).tolist()
            U, D, V = smith_normal_form(E)
            assert matmul(matmul(U, E), V) == D
            assert abs(int_det(U)) == 1 and abs(int_det(V)) == 1
            back = sympy.Matrix(U).inv() * sympy.Matrix(D) * sympy.Matrix(V).inv()
            assert back == sympy.Matrix(E)
            diag = [D[i][i] for i in range(min(m, k))]
            nz = [d for d in diag if d]
            assert all(d > 0 for d in nz)
            assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
            assert rank(E) == sympy.Matrix(E).rank() == len(nz)

    def test_det_matches_sympy(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 6))
            A = rng.integers(-9, 10, size=(n, n)).tolist()
            assert int_det(A) == sympy.Matrix(A).det()

    def test_kernel_examples(self):
        assert integer_kernel([[1, 0], [0, 1]]) == []
        assert integer_kernel([[1, 1]]) == [[1, -1]]
        assert sorted(integer_kernel([[0, 0], [0, 0]])) == [[0, 1], [1, 0]]

    def test_kernel_random(self, rng):
        for _ in range(50):
            m, k = int(rng.integers(1, 4)), int(rng.integers(2, 6))
            E = rng.integers(-3, 4, size=(m, k))
            K = integer_kernel(E.tolist())
            assert len(K) == k - rank(E.tolist())
            for v in K:
                assert not np.any(E @ np.array(v))
            if K:
                assert hermite_rows(K) == K

    def test_float_input_rejected(self):
        with pytest.raises(InvalidParameter):
            smith_normal_form([[1.5, 0]])


class TestEulerMap:
    def test_shapes_validated(self):
        with pytest.raises(InvalidParameter):
            EulerMap([[1, 0]], np.eye(2))
        with pytest.raises(InvalidParameter):
            EulerMap([[1], [0]], np.eye(2), k=2)

    def test_rank(self):
        assert EulerMap([[1, 2], [2, 4]], np.eye(2)).rank == 1
        assert EulerMap([[1, 0], [0, 1]], np.eye(2)).injective

    def test_gram_ee(self):
        assert np.allclose(gram_ee(EulerMap(np.eye(2, dtype=int), np.eye(2))), np.eye(2))
        assert np.allclose(gram_ee(EulerMap([[2, 0], [0, 3]], np.eye(2))), np.diag([4.0, 9.0]))
        w = eigvalsh(gram_ee(EulerMap([[1, 2], [2, 4]], np.eye(2))))
        assert abs(w[0]) < 1e-12

    def test_det_bound_examples(self):
        m = EulerMap(np.eye(2, dtype=int), np.eye(2))
        assert det_bound(m) == pytest.approx(1.0, rel=1e-15)
        m = EulerMap([[2, 0], [0, 3]], np.eye(2))
        assert det_bound(m) == pytest.approx(4.0, rel=1e-14)
        assert det_bound(m) == pytest.approx(lambda_min_sym(gram_ee(m)), rel=1e-14)

    def test_det_bound_rank_deficient(self):
        with pytest.raises(NotInjective):
            det_bound(EulerMap([[1, 1], [1, 1]], np.eye(2)))

    def test_det_bound_sound(self, rng):
        done = 0
        while done < 300:
            k = int(rng.integers(1, 5))
            b2 = k + int(rng.integers(0, 3))
            m = EulerMap(rng.integers(-10, 11, size=(b2, k)).tolist(), make_spd(rng, b2).entries)
            if not m.injective:
                continue
            done += 1
            lam = np.linalg.eigvalsh(m.matrix().T @ m.G.entries @ m.matrix())[0]
            assert det_bound(m) <= lam * (1 + 1e-10)
            if k == 1:
                assert det_bound(m) == pytest.approx(lam, rel=1e-10)

    def test_det_bound_isotropic_equality(self, rng):
        for c in (1, 2, 5):
            for k in (1, 2, 3, 4):
                m = EulerMap((c * np.eye(k, dtype=int)).tolist(), np.eye(k) * rng.uniform(0.5, 3.0))
                assert det_bound(m) == pytest.approx(lambda_min_sym(gram_ee(m)), rel=1e-10)

    def test_restricted_no_kernel_is_det_bound(self, rng):
        for _ in range(10):
            m = EulerMap(rng.integers(-4, 5, size=(3, 3)).tolist(), make_spd(rng, 3).entries)
            if m.injective:
                assert restricted_bound(m, GramMatrix(np.eye(3))) == pytest.approx(det_bound(m), rel=1e-10)

    def test_restricted_one_dim(self):
        m = EulerMap([[1, 0], [0, 0]], np.eye(2))
        assert restricted_bound(m, GramMatrix(np.eye(2))) == pytest.approx(1.0, rel=1e-15)
        assert kernel_basis(m) == [[0, 1]]

    def test_restricted_zero_map(self):
        with pytest.raises(NotApplicable):
            restricted_bound(EulerMap([[0, 0], [0, 0]], np.eye(2)), GramMatrix(np.eye(2)))

    def test_restricted_vs_projected_eigensolver(self, rng):
        done = 0
        while done < 200:
            k = int(rng.integers(2, 5))
            b2 = int(rng.integers(1, k + 1))
            E = rng.integers(-4, 5, size=(b2, k))
            m = EulerMap(E.tolist(), make_spd(rng, b2).entries)
            if m.injective or m.rank == 0:
                continue
            done += 1
            Fg = make_spd(rng, k)
            # Orthonormal coalgebra coordinates: W = L_f^T, then project off the kernel.
            W = m.G.factor @ E @ Fg.factor.T
            P = null_space(null_space(W).T)
            lam = np.linalg.eigvalsh(P.T @ W.T @ W @ P)[0]
            assert restricted_bound(m, Fg) <= lam * (1 + 1e-9)
            assert restricted_eigenvalues(m, Fg)[0] == pytest.approx(lam, rel=1e-8)


class TestRho:
    def test_trivial(self):
        assert rho(GramMatrix(np.eye(2))) == 1.0
        assert rho(GramMatrix(np.diag([4.0, 9.0]))) == 2.0

    def test_box_oracle_and_scaling(self, rng):
        for _ in range(10):
            G = make_spd(rng, 3)
            assert rho(G) == shortest_vector_oracle(G, 15)[1]
            assert rho(G.scaled(9.0)) == pytest.approx(3 * rho(G), rel=1e-12)


class TestKunneth:
    def test_examples(self):
        assert kunneth(SPHERE[2], SPHERE[1]) == [1, 1, 1, 1]
        N = kunneth(kunneth_power(SPHERE[2], 2), SPHERE[1])
        assert N == [1, 1, 2, 2, 1, 1]
        M = kunneth(kunneth_power(SPHERE[3], 2), SPHERE[1])
        assert M[2] == 0

    def test_algebra(self, rng):
        for _ in range(20):
            a, b, c = ([1] + rng.integers(0, 4, size=int(rng.integers(0, 4))).tolist() for _ in range(3))
            assert kunneth(a, b) == kunneth(b, a)
            assert kunneth(kunneth(a, b), c) == kunneth(a, kunneth(b, c))
            assert sum(kunneth(a, b)) == sum(a) * sum(b)

    def test_rejects(self):
        with pytest.raises(InvalidParameter):
            kunneth([0, 1], [1])


def test_base_data_validated():
    with pytest.raises(InvalidParameter):
        BaseManifoldData(vol_N=0.0, lambda01_N=1.0, lambda11_N=1.0)
    with pytest.raises(InvalidParameter):
        BaseManifoldData(vol_N=1.0, lambda01_N=1.0, lambda11_N=1.0, betti=(2, 0))
