"""Closed-form constants that appear in curvature and comparison estimates."""
from __future__ import annotations

import math
from typing import Tuple

from .errors import InvalidParameter


def oneill_bounds(a: float, n: int) -> Tuple[float, float]:
    """Coefficients bounding ``d omega`` of a vertical 1-form by ``omega``.

    Returns ``(8a/3, sqrt(4 a n (n-1) / 3))``: the first bounds
    ``|d omega(X, Y)|^2 / |omega|^2`` on an orthonormal horizontal pair, the
    second bounds ``|d omega| / |omega|`` after summing over all pairs.
    """
    if not (a > 0 and n >= 2):
        raise InvalidParameter("need a > 0 and n >= 2")
    return 8.0 * a / 3.0, math.sqrt(4.0 * a * n * (n - 1) / 3.0)


def dodziuk_factor(tau: float, n: int) -> float:
    """Distortion ``tau^(3n-1)`` of form eigenvalues between tau-quasi-isometric metrics."""
    if not tau >= 1:
        raise InvalidParameter("tau must be >= 1")
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return float(tau) ** (3 * n - 1)


def fmin_closed(a: float, b: float, eps: float, k: int) -> Tuple[float, float]:
    """Minimiser and minimum of ``f(t) = a t^(-2/(k-1)) + eps^2 b t^2`` on t > 0.

    ``t* = (a / (eps^2 b (k-1)))^((k-1)/(2k))`` and
    ``f(t*) = a^((k-1)/k) (eps^2 b)^(1/k) ((k-1)^(1/k) + (k-1)^(-(k-1)/k))``,
    so the minimum scales like ``eps^(2/k)``.
    """
    if not (a > 0 and b > 0 and eps > 0):
        raise InvalidParameter("a, b and eps must be positive")
    if k < 2:
        raise InvalidParameter("k must be >= 2")
    s = eps * eps * b
    t_star = (a / (s * (k - 1))) ** ((k - 1) / (2 * k))
    f_min = a ** ((k - 1) / k) * s ** (1.0 / k) * ((k - 1) ** (1.0 / k) + (k - 1) ** (-(k - 1) / k))
    return t_star, f_min


def f_objective(t: float, a: float, b: float, eps: float, k: int) -> float:
    return a * t ** (-2.0 / (k - 1)) + eps * eps * b * t * t
