import math

import numpy as np
import pytest

from collapse_lab.collapse import (
    CollapseFamily,
    eps_grid,
    evaluate,
    fit_loglog,
    sweep,
)
from collapse_lab.diophantine import cubic_direction, direction_frame, golden_direction
from collapse_lab.errors import InvalidParameter
from collapse_lab.euler import BaseManifoldData, EulerMap
from collapse_lab.presets import UnknownPreset, available, get_preset


def family(direction, preset="torus-base", **kw):
    p = get_preset(preset, direction.k)
    return CollapseFamily(direction, p.euler, p.base, **kw)


@pytest.fixture(scope="module")
def golden_report():
    return sweep(family(golden_direction()))


@pytest.fixture(scope="module")
def cubic_report():
    return sweep(family(cubic_direction()))


def test_eps_grid():
    g = eps_grid()
    assert len(g) == 25 and g[0] == 1.0 and g[-1] == 1e-6
    assert all(b < a for a, b in zip(g, g[1:]))
    ratios = np.diff(np.log(g))
    assert np.allclose(ratios, ratios[0])
    with pytest.raises(InvalidParameter):
        eps_grid(0.0)


def test_family_validation():
    p = get_preset("torus-base", 3)
    with pytest.raises(InvalidParameter):
        CollapseFamily(golden_direction(), p.euler, p.base)
    q = get_preset("torus-base", 2)
    with pytest.raises(InvalidParameter):
        CollapseFamily(golden_direction(), q.euler, q.base, eps_grid=(1.0, 2.0))
    with pytest.raises(InvalidParameter):
        CollapseFamily(golden_direction(), q.euler, q.base, eps_grid=(0.1, 0.5))


def test_evaluate_at_one():
    fam = CollapseFamily(golden_direction(), EulerMap(np.eye(2, dtype=int), np.eye(2)),
                         BaseManifoldData(vol_N=1.0, lambda01_N=1.0, lambda11_N=1.0))
    s = evaluate(fam, 1.0)
    assert s.vol_fiber == pytest.approx(1.0, rel=1e-15)
    assert s.lower_bound <= s.lambda_proxy <= s.rayleigh_upper * (1 + 1e-12)
    for v in (s.lower_bound, s.lambda_proxy, s.rayleigh_upper):
        assert 0.1 < v < 10


def test_evaluate_closed_forms():
    fam = family(golden_direction(), "skew-base")
    s1 = evaluate(fam, 1.0)
    for eps in (0.3, 1e-3, 1e-6):
        s = evaluate(fam, eps)
        assert s.rayleigh_upper / s1.rayleigh_upper == pytest.approx(eps ** 2, rel=1e-12)
        assert s.lower_bound / s1.lower_bound == pytest.approx(eps ** 2, rel=1e-12)
        assert s.vol_fiber == pytest.approx(eps * s1.vol_fiber, rel=1e-12)


def test_evaluate_deterministic():
    fam = family(cubic_direction(), "skew-base")
    assert evaluate(fam, 1e-4) == evaluate(fam, 1e-4)


def test_evaluate_bad_eps():
    with pytest.raises(InvalidParameter):
        evaluate(family(golden_direction()), 0.0)


def test_fit_loglog_exact():
    x = np.geomspace(1, 1e-4, 9)
    f = fit_loglog(x, 3 * x ** 1.5)
    assert f.slope == pytest.approx(1.5, abs=1e-12) and f.r2 == pytest.approx(1.0)
    assert f.intercept == pytest.approx(math.log(3), abs=1e-12)


def test_golden_sweep(golden_report):
    r = golden_report
    assert 0.47 <= r.fits["inj"].slope <= 0.53 and r.fits["inj"].r2 >= 0.995
    assert abs(r.fits["rayleigh_upper"].slope - 2) <= 1e-6
    assert abs(r.fits["lower_bound"].slope - 2) <= 1e-6
    assert r.sandwich_ok()
    assert r.chain_spread <= 100
    assert r.inj_constant_max / r.inj_constant_min < 10
    assert r.vol_ratio_spread <= 1e-12


def test_cubic_sweep(cubic_report):
    r = cubic_report
    assert 0.30 <= r.fits["inj"].slope <= 0.37
    assert r.sandwich_ok() and r.chain_spread <= 100


def test_rational_control_degrades():
    r = sweep(family(verify_rational()))
    assert abs(r.fits["inj"].slope - 0.5) > 0.03
    assert r.chain_spread > 100
    assert r.c_Q == 0.0 and not r.direction_verified


def verify_rational():
    from collapse_lab.diophantine import verify_direction

    return verify_direction(direction_frame([3 / 7]))


@pytest.mark.parametrize("name", ["torus-base", "example-S3", "skew-base"])
@pytest.mark.parametrize("make", [golden_direction, cubic_direction])
def test_sandwich_every_injective_preset(name, make):
    r = sweep(family(make(), name))
    assert r.injective and r.sandwich_ok()


def test_kernel_preset_lower_side():
    r = sweep(family(cubic_direction(), "kernel-demo"))
    assert not r.injective
    assert all(s.lower_bound <= s.lambda_proxy * (1 + 1e-12) for s in r.samples)


def test_threads_identical(golden_report):
    r = sweep(family(golden_direction()), threads=4)
    assert r.samples == golden_report.samples


def test_sweep_needs_five_points():
    with pytest.raises(InvalidParameter):
        sweep(family(golden_direction(), eps_grid=(1.0, 0.1)))


def test_failed_sample_records_eps(monkeypatch):
    import collapse_lab.collapse as mod

    fam = family(golden_direction(), eps_grid=tuple(eps_grid(1e-6, 1.0, 5)))
    orig = mod.injectivity_radius

    class Boom(Exception):
        pass

    def flaky(G, **kw):
        if np.linalg.det(G.entries) < 1e-8:
            raise Boom()
        return orig(G, **kw)

    monkeypatch.setattr(mod, "injectivity_radius", flaky)
    with pytest.raises(Boom) as info:
        sweep(fam)
    assert info.value.eps == pytest.approx(1e-6 ** 0.75)


def test_presets_registry():
    assert available() == ["example-S3", "kernel-demo", "skew-base", "torus-base"]
    with pytest.raises(UnknownPreset, match="available"):
        get_preset("nope", 2)
    assert get_preset("kernel-demo", 3).euler.rank == 2
    for k in (1, 2, 3, 4):
        p = get_preset("torus-base", k)
        assert p.euler.injective and p.euler.k == k
