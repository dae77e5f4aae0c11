"""Named Euler-map / base-manifold presets addressable from configs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np

from .errors import InvalidParameter
from .euler import SPHERE, BaseManifoldData, EulerMap, kunneth, kunneth_power


@dataclass(frozen=True)
class Preset:
    name: str
    euler: EulerMap
    base: BaseManifoldData
    synthetic: bool
    description: str


def _torus_base(k: int) -> Preset:
    # Flat unit torus T^m with b2 = C(m, 2) >= k; dx_i ^ dx_j are orthonormal
    # integral harmonic forms, so G = I exactly.
    m = 2
    while math.comb(m, 2) < k:
        m += 1
    b2 = math.comb(m, 2)
    E = [[int(i == j) for j in range(k)] for i in range(b2)]
    betti = tuple(math.comb(m, p) for p in range(m + 1))
    base = BaseManifoldData(
        vol_N=1.0,
        lambda01_N=4 * math.pi ** 2,
        lambda11_N=4 * math.pi ** 2,
        betti=betti,
        curvature_bound=1.0,
        diameter=math.sqrt(m) / 2,
    )
    return Preset("torus-base", EulerMap(E, np.eye(b2)), base, False, f"flat unit T^{m}, e = first {k} classes")


def _example_s3(k: int) -> Preset:
    # N = (S^2)^k x S^1 under the Hopf fibrations; the product metric is
    # replaced by G = I.
    betti = kunneth(kunneth_power(SPHERE[2], k), SPHERE[1])
    base = BaseManifoldData(
        vol_N=1.0,
        lambda01_N=1.0,
        lambda11_N=1.0,
        betti=tuple(betti),
        curvature_bound=1.0,
        diameter=math.pi * math.sqrt(k + 1),
    )
    E = np.eye(k, dtype=int).tolist()
    return Preset("example-S3", EulerMap(E, np.eye(k)), base, True, f"(S^3)^{k} x S^1 -> (S^2)^{k} x S^1, G = I stand-in")


def _skew_matrices(k: int):
    b2 = k + 1
    E = [[0] * k for _ in range(b2)]
    for j in range(k):
        E[j][j] = 2
        if j + 1 < k:
            E[j][j + 1] = 1
        E[k][j] = 1
    G = np.zeros((b2, b2))
    for i in range(b2):
        G[i, i] = 1.0 + 0.25 * i
        if i + 1 < b2:
            G[i, i + 1] = G[i + 1, i] = 0.3
    return E, G


def _skew_base(k: int) -> Preset:
    E, G = _skew_matrices(k)
    base = BaseManifoldData(vol_N=2.0, lambda01_N=1.0, lambda11_N=1.0, betti=(1, 0, k + 1), curvature_bound=1.0, diameter=1.0)
    return Preset("skew-base", EulerMap(E, G), base, True, "injective, anisotropic synthetic Euler data")


def _kernel_demo(k: int) -> Preset:
    if k < 2:
        raise InvalidParameter("kernel-demo needs k >= 2")
    E, G = _skew_matrices(k)
    for row in E:
        row[k - 1] = row[0]
    base = BaseManifoldData(vol_N=2.0, lambda01_N=1.0, lambda11_N=1.0, betti=(1, 0, k + 1), curvature_bound=1.0, diameter=1.0)
    return Preset("kernel-demo", EulerMap(E, G), base, True, "rank k-1 synthetic Euler data, kernel e_1 - e_k")


REGISTRY: Dict[str, Callable[[int], Preset]] = {
    "torus-base": _torus_base,
    "example-S3": _example_s3,
    "skew-base": _skew_base,
    "kernel-demo": _kernel_demo,
}


def available() -> List[str]:
    return sorted(REGISTRY)


class UnknownPreset(InvalidParameter):
    pass


def get_preset(name: str, k: int) -> Preset:
    try:
        build = REGISTRY[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; available: {', '.join(available())}") from None
    return build(k)
