"""JSON experiment configs.

Schema (all keys except ``direction`` and ``euler`` optional)::

    {
      "experiment": "sweep",
      "direction": {"kind": "golden" | "cubic" | "custom", "y": [...]},
      "euler": {"preset": "torus-base"} | {"E": [[...]], "G": [[...]]},
      "base": {"vol_N": 1, "lambda01_N": 1, "lambda11_N": 1, "a": 1, "d": 1, "betti": [1, ...]},
      "eps": {"min": 1e-6, "max": 1, "points": 25},
      "dioph": {"Q": 10000},
      "assertions": {
        "sandwich": true,
        "chain_factor": 100,
        "slopes": [{"field": "inj", "expected": 0.5, "tol": 0.03}]
      }
    }

``custom`` entries of ``y`` may be numbers or fraction strings such as "3/7".
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .collapse import DEFAULT_CHAIN_FACTOR, FIT_FIELDS, CollapseFamily, eps_grid
from .diophantine import cubic_direction, direction_frame, golden_direction, verify_direction
from .errors import CollapseLabError, InvalidParameter
from .euler import BaseManifoldData, EulerMap
from .presets import get_preset

EXPERIMENTS = ("sweep",)
TOP_KEYS = {"experiment", "name", "direction", "euler", "base", "eps", "dioph", "assertions"}
BASE_KEYS = {"vol_N": "vol_N", "lambda01_N": "lambda01_N", "lambda11_N": "lambda11_N",
             "a": "curvature_bound", "d": "diameter", "betti": "betti"}


class ConfigError(InvalidParameter):
    """Malformed config; the message names the offending key."""


@dataclass(frozen=True)
class SlopeAssertion:
    field: str
    expected: float
    tol: float


@dataclass
class Experiment:
    name: str
    family: CollapseFamily
    dioph_Q: int = 10_000
    sandwich: bool = False
    chain_factor: float = DEFAULT_CHAIN_FACTOR
    slopes: List[SlopeAssertion] = field(default_factory=list)
    preset: Optional[str] = None


def _get(d: dict, key: str, path: str, kind=None, default=...):
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    if key not in d:
        if default is ...:
            raise ConfigError(f"missing key '{path}.{key}'" if path else f"missing key '{key}'")
        return default
    v = d[key]
    if kind is not None and not isinstance(v, kind) or isinstance(v, bool) and kind in (int, float, (int, float)):
        raise ConfigError(f"key '{path + '.' if path else ''}{key}' has wrong type {type(v).__name__}")
    return v


def _number(v, key):
    if isinstance(v, bool):
        raise ConfigError(f"key '{key}' must be a number")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(Fraction(v))
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"key '{key}' must be a number, got {v!r}")


def _direction(cfg):
    kind = _get(cfg, "kind", "direction", str)
    if kind == "golden":
        return golden_direction()
    if kind == "cubic":
        return cubic_direction()
    if kind == "custom":
        y = _get(cfg, "y", "direction")
        if not isinstance(y, list):
            y = [y]
        if not y:
            raise ConfigError("key 'direction.y' must be nonempty")
        ys = [_number(v, f"direction.y[{i}]") for i, v in enumerate(y)]
        return verify_direction(direction_frame(ys, label="custom"))
    raise ConfigError(f"key 'direction.kind' must be golden, cubic or custom, got {kind!r}")


def _euler(cfg, k):
    if "preset" in cfg:
        p = get_preset(_get(cfg, "preset", "euler", str), k)
        return p.euler, p.base, p.name
    E = _get(cfg, "E", "euler", list)
    G = _get(cfg, "G", "euler", list)
    try:
        return EulerMap(E, G, k=k), None, None
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"key 'euler': {exc}") from None


def _base(cfg, default: Optional[BaseManifoldData]):
    values = {}
    if default is not None:
        values = dict(vol_N=default.vol_N, lambda01_N=default.lambda01_N, lambda11_N=default.lambda11_N,
                      betti=default.betti, curvature_bound=default.curvature_bound, diameter=default.diameter)
    if cfg is None:
        cfg = {}
    if not isinstance(cfg, dict):
        raise ConfigError("key 'base' must be an object")
    for key in cfg:
        if key not in BASE_KEYS:
            raise ConfigError(f"unknown key 'base.{key}'")
    for key, attr in BASE_KEYS.items():
        if key in cfg:
            values[attr] = cfg[key] if key == "betti" else _number(cfg[key], f"base.{key}")
    for key in ("vol_N", "lambda01_N", "lambda11_N"):
        if key not in values:
            raise ConfigError(f"missing key 'base.{key}'")
    try:
        return BaseManifoldData(**values)
    except InvalidParameter as exc:
        raise ConfigError(f"key 'base': {exc}") from None


def parse_experiment(cfg: dict, name: str = "experiment") -> Experiment:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    for key in cfg:
        if key not in TOP_KEYS:
            raise ConfigError(f"unknown key '{key}'")
    exp = _get(cfg, "experiment", "", str, "sweep")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"key 'experiment' must be one of {EXPERIMENTS}, got {exp!r}")
    direction = _direction(_get(cfg, "direction", "", dict))
    euler, preset_base, preset = _euler(_get(cfg, "euler", "", dict), direction.k)
    base = _base(cfg.get("base"), preset_base)

    eps_cfg = _get(cfg, "eps", "", dict, {})
    for key in eps_cfg:
        if key not in ("min", "max", "points"):
            raise ConfigError(f"unknown key 'eps.{key}'")
    e_min = _number(eps_cfg.get("min", 1e-6), "eps.min")
    e_max = _number(eps_cfg.get("max", 1.0), "eps.max")
    points = eps_cfg.get("points", 25)
    if not isinstance(points, int) or isinstance(points, bool):
        raise ConfigError("key 'eps.points' must be an integer")
    for key, v in (("eps.min", e_min), ("eps.max", e_max)):
        if not 0 < v <= 1:
            raise InvalidParameter(f"key '{key}': eps must lie in (0, 1], got {v!r}")
    grid = eps_grid(e_min, e_max, points)
    family = CollapseFamily(direction, euler, base, tuple(grid))

    dioph = _get(cfg, "dioph", "", dict, {})
    Q = _get(dioph, "Q", "dioph", int, 10_000)
    if Q < 1:
        raise ConfigError("key 'dioph.Q' must be >= 1")

    asserts = _get(cfg, "assertions", "", dict, {})
    for key in asserts:
        if key not in ("sandwich", "chain_factor", "slopes"):
            raise ConfigError(f"unknown key 'assertions.{key}'")
    sandwich = _get(asserts, "sandwich", "assertions", bool, False)
    chain_factor = _number(asserts.get("chain_factor", DEFAULT_CHAIN_FACTOR), "assertions.chain_factor")
    slopes_cfg = asserts.get("slopes", [])
    if isinstance(slopes_cfg, dict):
        slopes_cfg = [slopes_cfg]
    if not isinstance(slopes_cfg, list):
        raise ConfigError("key 'assertions.slopes' must be an object or a list")
    slopes = []
    for i, s in enumerate(slopes_cfg):
        path = f"assertions.slopes[{i}]"
        fld = _get(s, "field", path, str)
        if fld not in FIT_FIELDS:
            raise ConfigError(f"key '{path}.field' must be one of {FIT_FIELDS}, got {fld!r}")
        slopes.append(SlopeAssertion(fld, _number(_get(s, "expected", path), f"{path}.expected"),
                                     _number(_get(s, "tol", path), f"{path}.tol")))
    return Experiment(
        name=str(cfg.get("name", name)),
        family=family,
        dioph_Q=Q,
        sandwich=sandwich,
        chain_factor=chain_factor,
        slopes=slopes,
        preset=preset,
    )


def load_config(path) -> List[Experiment]:
    """Parse a config file holding one experiment or ``{"experiments": [...]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(cfg, dict) and "experiments" in cfg:
        if set(cfg) != {"experiments"} or not isinstance(cfg["experiments"], list) or not cfg["experiments"]:
            raise ConfigError("key 'experiments' must be the only key and a nonempty list")
        exps = [parse_experiment(c, name=f"experiment{i}") for i, c in enumerate(cfg["experiments"])]
        names = [e.name for e in exps]
        if len(set(names)) != len(names):
            raise ConfigError("key 'experiments[].name' must be unique")
        return exps
    return [parse_experiment(cfg)]


__all__ = ["ConfigError", "CollapseLabError", "Experiment", "SlopeAssertion", "load_config", "parse_experiment"]
