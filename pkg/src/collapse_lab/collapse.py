"""The collapsing family g_eps and its measured quantities.

For a direction ``y`` the fibre metric at scale eps makes
``(X_1 / eps, X_2, ..., X_k)`` orthonormal.  Each sample records the fibre
volume, the injectivity radius, the Rayleigh quotient of the test form
``eps^-1 omega_1``, the smallest Rayleigh quotient over constant vertical
invariant forms (``lambda_proxy``), the lower bound coming from the
eigenvalues of e*e, and the invariance threshold of the fibre.

L^2 norms on M integrate the fibre volume explicitly:
``|beta|^2 = int_N |beta|^2 * vol_fiber``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional, Sequence

import numpy as np

from .diophantine import CollapseDirection, approx_constant
from .errors import InvalidParameter
from .euler import BaseManifoldData, EulerMap, det_bound, restricted_bound, restricted_eigenvalues
from .jacobi import lambda_min_sym
from .lattice import collapse_gram, injectivity_radius, volume
from .spectrum import invariance_threshold

DEFAULT_EPS_MIN = 1e-6
DEFAULT_EPS_POINTS = 25
SUSPECT_R2 = 0.999
# Inequalities of the sandwich are checked up to this relative slack: the
# isotropic presets attain equality in exact arithmetic.
SANDWICH_RTOL = 1e-12
DEFAULT_CHAIN_FACTOR = 100.0


def eps_grid(eps_min: float = DEFAULT_EPS_MIN, eps_max: float = 1.0, points: int = DEFAULT_EPS_POINTS) -> List[float]:
    """Log-spaced, strictly decreasing grid from ``eps_max`` down to ``eps_min``."""
    if not (0 < eps_min <= eps_max <= 1):
        raise InvalidParameter(f"need 0 < eps_min <= eps_max <= 1, got {eps_min!r}, {eps_max!r}")
    if points < 1 or (points > 1 and eps_min == eps_max):
        raise InvalidParameter("grid needs >= 1 point and distinct endpoints for more than one")
    if points == 1:
        return [float(eps_max)]
    grid = np.geomspace(eps_max, eps_min, points)
    grid[0], grid[-1] = eps_max, eps_min
    return [float(e) for e in grid]


@dataclass(frozen=True, eq=False)
class CollapseFamily:
    direction: CollapseDirection
    euler: EulerMap
    base: BaseManifoldData
    eps_grid: tuple = field(default_factory=lambda: tuple(eps_grid()))

    def __post_init__(self):
        if self.euler.k != self.direction.k:
            raise InvalidParameter(f"Euler map has k={self.euler.k} but direction has k={self.direction.k}")
        grid = tuple(float(e) for e in self.eps_grid)
        if not grid:
            raise InvalidParameter("eps grid is empty")
        for e in grid:
            if not (math.isfinite(e) and 0 < e <= 1):
                raise InvalidParameter(f"eps must lie in (0, 1], got {e!r}")
        if any(b >= a for a, b in zip(grid, grid[1:])):
            raise InvalidParameter("eps grid must be strictly decreasing")
        object.__setattr__(self, "eps_grid", grid)

    @property
    def k(self) -> int:
        return self.direction.k


@dataclass(frozen=True)
class CollapseSample:
    eps: float
    vol_fiber: float
    inj: float
    rayleigh_upper: float
    lambda_proxy: float
    lower_bound: float
    invariance_thresh: float

    def sandwich_holds(self, rtol: float = SANDWICH_RTOL, upper: bool = True) -> bool:
        """``lower_bound <= lambda_proxy <= rayleigh_upper``.

        With ``upper=False`` only the left inequality is checked; the test form
        behind ``rayleigh_upper`` is orthogonal to the harmonic forms only when
        the Euler map is injective.
        """
        ok = self.lower_bound <= self.lambda_proxy * (1 + rtol)
        if upper:
            ok = ok and self.lambda_proxy <= self.rayleigh_upper * (1 + rtol)
        return ok


SAMPLE_FIELDS = tuple(f.name for f in fields(CollapseSample))


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r2: float


def fit_loglog(x: Sequence[float], y: Sequence[float]) -> ScalingFit:
    """Ordinary least squares of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    if lx.size < 2:
        raise InvalidParameter("need at least two points to fit")
    xm, ym = lx.mean(), ly.mean()
    sxx = float(np.sum((lx - xm) ** 2))
    if sxx == 0:
        raise InvalidParameter("abscissae are all equal")
    slope = float(np.sum((lx - xm) * (ly - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((ly - ym) ** 2))
    ss_res = float(np.sum((ly - (intercept + slope * lx)) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return ScalingFit(slope, intercept, r2)


def evaluate(family: CollapseFamily, eps: float) -> CollapseSample:
    """All computable quantities of (M, g_eps)."""
    if not (math.isfinite(eps) and 0 < eps <= 1):
        raise InvalidParameter(f"eps must lie in (0, 1], got {eps!r}")
    m, base = family.euler, family.base
    G = collapse_gram(family.direction, eps)
    vol_fiber = volume(G)
    inj = injectivity_radius(G)

    X1 = np.asarray(family.direction.frame[0], dtype=float)
    eX1 = m.images(X1[:, None])[:, 0]
    rayleigh_upper = eps * eps * float(eX1 @ eX1) / base.vol_N

    if m.injective:
        # G.factor.T = Q^T diag(eps, 1, ...): the g_eps-orthonormal dual frame.
        B = m.images(G.factor.T)
        lambda_proxy = lambda_min_sym(B.T @ B) / base.vol_N
        lower = det_bound(m) * vol_fiber * vol_fiber / base.vol_N
    else:
        lambda_proxy = float(restricted_eigenvalues(m, G)[0]) / base.vol_N
        lower = restricted_bound(m, G) / base.vol_N

    return CollapseSample(
        eps=float(eps),
        vol_fiber=vol_fiber,
        inj=inj,
        rayleigh_upper=rayleigh_upper,
        lambda_proxy=float(lambda_proxy),
        lower_bound=float(lower),
        invariance_thresh=invariance_threshold(G, 1.0),
    )


@dataclass
class CollapseReport:
    samples: List[CollapseSample]
    fits: Dict[str, ScalingFit]
    k: int
    injective: bool
    chain_ratio_max: float
    chain_ratio_min: float
    inj_constant_min: float
    inj_constant_max: float
    vol_ratio_spread: float
    c_Q: Optional[float] = None
    direction_label: str = "custom"
    direction_verified: bool = False

    @property
    def chain_spread(self) -> float:
        """max / min over the grid of ``rayleigh_upper / inj^(2k)``."""
        return self.chain_ratio_max / self.chain_ratio_min

    def sandwich_ok(self, rtol: float = SANDWICH_RTOL) -> bool:
        return all(s.sandwich_holds(rtol, upper=self.injective) for s in self.samples)

    def suspect_fits(self) -> List[str]:
        return [name for name, f in self.fits.items() if f.r2 < SUSPECT_R2]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "injective": self.injective,
            "direction": {"label": self.direction_label, "verified": self.direction_verified, "c_Q": self.c_Q},
            "fits": {name: asdict(f) for name, f in self.fits.items()},
            "suspect_fits": self.suspect_fits(),
            "constants": {
                "chain_ratio_max": self.chain_ratio_max,
                "chain_ratio_min": self.chain_ratio_min,
                "chain_spread": self.chain_spread,
                "inj_constant_min": self.inj_constant_min,
                "inj_constant_max": self.inj_constant_max,
                "vol_ratio_spread": self.vol_ratio_spread,
            },
            "sandwich": self.sandwich_ok(),
            "samples": [asdict(s) for s in self.samples],
        }


FIT_FIELDS = ("inj", "rayleigh_upper", "lambda_proxy", "lower_bound")


def sweep(family: CollapseFamily, threads: int = 1, dioph_Q: Optional[int] = 10_000) -> CollapseReport:
    """Evaluate the family on its grid and fit the scaling exponents.

    A sample that raises aborts the sweep; the exception carries the failing
    ``eps`` as attribute ``eps``.
    """
    grid = family.eps_grid
    if len(grid) < 5:
        raise InvalidParameter(f"sweep needs >= 5 grid points, got {len(grid)}")

    def one(eps):
        try:
            return evaluate(family, eps)
        except Exception as exc:
            exc.eps = eps
            raise

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(one, grid))
    else:
        samples = [one(e) for e in grid]

    eps = [s.eps for s in samples]
    fits = {}
    for name in FIT_FIELDS:
        ys = [getattr(s, name) for s in samples]
        if all(v > 0 for v in ys):
            fits[name] = fit_loglog(eps, ys)
    k = family.k
    chain = [s.rayleigh_upper / s.inj ** (2 * k) for s in samples]
    inj_c = [s.inj / s.eps ** (1.0 / k) for s in samples]
    vol_r = [s.vol_fiber / s.eps for s in samples]
    c_Q = approx_constant(family.direction, dioph_Q) if dioph_Q else None
    return CollapseReport(
        samples=samples,
        fits=fits,
        k=k,
        injective=family.euler.injective,
        chain_ratio_max=max(chain),
        chain_ratio_min=min(chain),
        inj_constant_min=min(inj_c),
        inj_constant_max=max(inj_c),
        vol_ratio_spread=max(vol_r) / min(vol_r) - 1.0,
        c_Q=c_Q,
        direction_label=family.direction.label,
        direction_verified=family.direction.verified,
    )
