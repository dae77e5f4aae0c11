"""Seeded property suite behind ``collapse-lab selftest``.

Every check pairs a package routine with an independent route (exhaustive
scan, numpy eigensolver, closed form, numeric minimiser) and returns a
:class:`Check`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy.optimize import minimize_scalar

from .bounds import f_objective, fmin_closed
from .collapse import CollapseFamily, sweep
from .diophantine import GOLDEN, approx_constant, cubic_direction, direction_frame, golden_direction
from .euler import SPHERE, EulerMap, det_bound, gram_ee, kunneth, kunneth_power
from .lattice import GramMatrix, dual_gram, shortest_vector, shortest_vector_oracle
from .presets import get_preset
from .smith import int_det, matmul, smith_normal_form
from .spectrum import FOUR_PI2, function_spectrum, group_shells, invariance_threshold, pform_spectrum


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def random_spd(rng: np.random.Generator, k: int, jitter: float = 0.3) -> GramMatrix:
    A = np.eye(k) + jitter * rng.standard_normal((k, k))
    A *= rng.uniform(0.5, 2.0)
    return GramMatrix(A.T @ A + 1e-3 * np.eye(k))


def check_svp(rng, n=500, box=25) -> Check:
    bad = 0
    for _ in range(n):
        G = random_spd(rng, int(rng.integers(2, 5)))
        if shortest_vector(G) != shortest_vector_oracle(G, box):
            bad += 1
    return Check("svp_vs_box_oracle", bad == 0, f"{n - bad}/{n} agree (box {box})")


def check_det_bound(rng, n=1000) -> Check:
    bad, done = 0, 0
    while done < n:
        k = int(rng.integers(1, 5))
        b2 = k + int(rng.integers(0, 3))
        E = rng.integers(-10, 11, size=(b2, k))
        m = EulerMap(E.tolist(), random_spd(rng, b2).entries)
        if not m.injective:
            continue
        done += 1
        lam = np.linalg.eigvalsh(gram_ee(m))[0]
        if det_bound(m) > lam * (1 + 1e-10):
            bad += 1
    return Check("det_bound_soundness", bad == 0, f"{bad} violations in {n}")


def check_spectrum(rng, n=50, box=10, count=5) -> Check:
    bad = 0
    for _ in range(n):
        k = int(rng.integers(2, 4))
        G = random_spd(rng, k, jitter=0.15)
        spec = function_spectrum(G, count)
        D = dual_gram(G)
        rmax = spec[-1][0] / FOUR_PI2
        reach = math.sqrt(rmax) * np.sqrt(np.diag(G.entries))
        if np.any(reach >= box):
            continue
        pts = [v for v in itertools.product(range(-box, box + 1), repeat=k) if any(v)]
        shells = [(0.0, 1)] + group_shells(D.norm2(v) for v in pts)
        got = [m for _, m in spec]
        want = [m for _, m in shells[:count]]
        if got != want:
            bad += 1
        for p in range(k + 1):
            if pform_spectrum(G, p, count) != pform_spectrum(G, k - p, count):
                bad += 1
    return Check("spectrum_shells_and_hodge", bad == 0, f"{bad} mismatches in {n}")


def check_kunneth() -> Check:
    ok = True
    for k in (1, 2, 3):
        N = kunneth(kunneth_power(SPHERE[2], k), SPHERE[1])
        M = kunneth(kunneth_power(SPHERE[3], k), SPHERE[1])
        ok &= N[1] == 1 and N[2] == k and M[2] == 0
    return Check("kunneth_presets", ok, "b1(N)=1, b2(N)=k, b2(M)=0 for k=1..3")


def check_thresholds(rng, n=20) -> Check:
    worst = 0.0
    for _ in range(n):
        l0 = float(rng.uniform(0.1, 10.0))
        got = invariance_threshold(GramMatrix([[l0 * l0]]), 1.0)
        worst = max(worst, abs(got / (2 * math.pi / l0) ** 2 - 1))
    return Check("threshold_circle", worst <= 1e-12, f"max rel err {worst:.2e}")


def check_fmin(rng, n=100) -> Check:
    worst = 0.0
    for _ in range(n):
        a, b = rng.uniform(0.1, 10.0, size=2)
        eps = float(10 ** rng.uniform(-3, 0))
        k = int(rng.integers(2, 6))
        t_star, f_min = fmin_closed(a, b, eps, k)
        res = minimize_scalar(lambda s: f_objective(math.exp(s), a, b, eps, k),
                              bracket=(math.log(t_star) - 3, math.log(t_star), math.log(t_star) + 3),
                              method="golden", tol=1e-12)
        worst = max(worst, abs(res.fun / f_min - 1))
    return Check("fmin_closed_vs_golden", worst <= 1e-9, f"max rel err {worst:.2e}")


def check_smith(rng, n=200) -> Check:
    bad = 0
    for _ in range(n):
        m, k = rng.integers(1, 5, size=2)
        E = rng.integers(-6, 7, size=(m, k)).tolist()
        U, D, V = smith_normal_form(E)
        if matmul(matmul(U, E), V) != D or abs(int_det(U)) != 1 or abs(int_det(V)) != 1:
            bad += 1
    return Check("smith_decomposition", bad == 0, f"{bad} failures in {n}")


def check_dioph() -> Check:
    fib = [1, 2]
    while fib[-1] <= 10**5:
        fib.append(fib[-1] + fib[-2])
    fib_inf = min(q * abs(q * GOLDEN - round(q * GOLDEN)) for q in fib if q <= 10**5)
    c = approx_constant(golden_direction(), 10**5)
    rational = approx_constant(direction_frame([3 / 7]), 7)
    ok = abs(c - fib_inf) <= 1e-3 and rational == 0.0
    return Check("diophantine_constant", ok, f"c_Q={c:.6f} fib={fib_inf:.6f} rational={rational}")


def check_sweeps() -> Check:
    lines, ok = [], True
    for d, lo, hi in ((golden_direction(), 0.47, 0.53), (cubic_direction(), 0.30, 0.37)):
        p = get_preset("torus-base", d.k)
        r = sweep(CollapseFamily(d, p.euler, p.base))
        s = r.fits["inj"].slope
        ok &= lo <= s <= hi and r.sandwich_ok() and r.chain_spread <= 100
        lines.append(f"{d.label}: inj slope {s:.4f}, chain spread {r.chain_spread:.3g}")
    return Check("collapse_sweeps", bool(ok), "; ".join(lines))


def run_all(seed: int = 0) -> List[Check]:
    rng = np.random.default_rng(seed)
    suite: List[Callable[[], Check]] = [
        lambda: check_svp(rng),
        lambda: check_det_bound(rng),
        lambda: check_spectrum(rng),
        check_kunneth,
        lambda: check_thresholds(rng),
        lambda: check_fmin(rng),
        lambda: check_smith(rng),
        check_dioph,
        check_sweeps,
    ]
    return [f() for f in suite]

