import math

import mpmath
import numpy as np
import pytest

from collapse_lab.bounds import dodziuk_factor, f_objective, fmin_closed, oneill_bounds
from collapse_lab.errors import InvalidParameter

mpmath.mp.dps = 40


def mp_argmin(a, b, eps, k):
    """High-precision stationary point of f, independent of the closed form."""
    a, b, eps = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(eps)

    def f(t):
        return a * t ** (mpmath.mpf(-2) / (k - 1)) + eps ** 2 * b * t ** 2

    t = mpmath.findroot(lambda s: mpmath.diff(f, s), mpmath.mpf(1) / eps ** (mpmath.mpf(k - 1) / k))
    return t, f(t)


def test_oneill():
    assert oneill_bounds(3, 2)[0] == pytest.approx(8.0, rel=1e-15)
    assert oneill_bounds(0.75, 2)[0] == pytest.approx(2.0, rel=1e-15)
    assert oneill_bounds(3, 3)[1] == pytest.approx(math.sqrt(24), rel=1e-15)
    with pytest.raises(InvalidParameter):
        oneill_bounds(-1, 2)


def test_dodziuk():
    assert dodziuk_factor(1.0, 5) == 1.0
    assert dodziuk_factor(2.0, 3) == 256.0
    assert dodziuk_factor(1.5, 3) > dodziuk_factor(1.4, 3)
    assert dodziuk_factor(1.5, 4) > dodziuk_factor(1.5, 3)
    with pytest.raises(InvalidParameter):
        dodziuk_factor(0.9, 2)


def test_fmin_symmetric_case():
    t, f = fmin_closed(1.0, 1.0, 1.0, 2)
    assert t == pytest.approx(1.0, rel=1e-15) and f == pytest.approx(2.0, rel=1e-15)


def test_fmin_scaling():
    for k in (2, 3, 5):
        _, f1 = fmin_closed(1.3, 0.7, 1.0, k)
        _, fh = fmin_closed(1.3, 0.7, 0.5, k)
        assert fh / f1 == pytest.approx(0.5 ** (2 / k), rel=1e-12)


def test_fmin_against_mpmath(rng):
    for _ in range(30):
        a, b = rng.uniform(0.1, 10.0, size=2)
        eps = float(10 ** rng.uniform(-3, 0))
        k = int(rng.integers(2, 6))
        t, f = fmin_closed(a, b, eps, k)
        t_ref, f_ref = mp_argmin(a, b, eps, k)
        assert t == pytest.approx(float(t_ref), rel=1e-9)
        assert f == pytest.approx(float(f_ref), rel=1e-9)
        assert f_objective(t, a, b, eps, k) == pytest.approx(f, rel=1e-12)


def test_fmin_rejects():
    with pytest.raises(InvalidParameter):
        fmin_closed(1.0, 1.0, 0.0, 2)
    with pytest.raises(InvalidParameter):
        fmin_closed(1.0, 1.0, 1.0, 1)
