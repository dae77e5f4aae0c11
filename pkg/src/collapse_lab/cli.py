"""Command-line front end: ``collapse-lab <subcommand>``.

Exit codes: 0 success, 2 a checked invariant or assertion failed, 1 error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__
from .errors import CollapseLabError, NotApplicable
from .presets import UnknownPreset

THREADS_ENV = "COLLAPSE_LAB_THREADS"


def _threads(value: Optional[int]) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                value = int(env)
            except ValueError:
                raise CollapseLabError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        else:
            value = 1
    if value < 1:
        raise CollapseLabError("--threads must be >= 1")
    return value


def _matrix(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise CollapseLabError(f"{what}: expected a JSON matrix, got {text!r}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def run_config(path: str, out: str = "out", threads: Optional[int] = None) -> int:
    """Execute every experiment of a config file; returns the process exit code."""
    from .config import load_config
    from .report import run_experiment

    try:
        exps = load_config(path)
        n = _threads(threads)
        ok = True
        for exp in exps:
            target = out if len(exps) == 1 else os.path.join(out, exp.name)
            passed = run_experiment(exp, target, threads=n)
            print(f"{exp.name}: {'PASS' if passed else 'FAIL'} -> {target}")
            ok &= passed
    except UnknownPreset as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CollapseLabError, OSError) as exc:
        where = getattr(exc, "eps", None)
        suffix = f" (at eps={where!r})" if where is not None else ""
        print(f"error: {type(exc).__name__}: {exc}{suffix}", file=sys.stderr)
        return 1
    return 0 if ok else 2


def cmd_sweep(args) -> int:
    if not args.config:
        raise CollapseLabError("sweep requires --config <path>")
    return run_config(args.config, args.out, args.threads)


def cmd_svp(args) -> int:
    from .lattice import GramMatrix, injectivity_radius, shortest_vector, shortest_vector_oracle

    G = GramMatrix(_matrix(args.gram, "--gram"))
    v, norm = shortest_vector(G)
    out = {"vector": list(v), "norm": norm, "injectivity_radius": injectivity_radius(G)}
    code = 0
    if args.oracle_box:
        ov, onorm = shortest_vector_oracle(G, args.oracle_box)
        out["oracle"] = {"vector": list(ov), "norm": onorm, "agree": ov == v}
        code = 0 if ov == v else 2
    _emit(out)
    return code


def cmd_dioph(args) -> int:
    from .diophantine import approx_constant, cubic_direction, direction_frame, golden_direction, verify_direction

    if args.kind == "golden":
        d = golden_direction()
    elif args.kind == "cubic":
        d = cubic_direction()
    else:
        if not args.y:
            raise CollapseLabError("--kind custom requires --y")
        d = verify_direction(direction_frame([float(Fraction(v)) for v in args.y.split(",")], label="custom"))
    c = approx_constant(d, args.Q, q_min=args.q_min)
    _emit({"label": d.label, "k": d.k, "y": d.y.tolist(), "Q": args.Q, "q_min": args.q_min, "c_Q": c,
           "verified": d.verified, "frame": d.frame.tolist(), "orthogonality_residual": d.orthogonality_residual()})
    return 0


def cmd_spectrum(args) -> int:
    from .lattice import GramMatrix
    from .spectrum import pform_spectrum

    G = GramMatrix(_matrix(args.gram, "--gram"))
    spec = pform_spectrum(G, args.p, args.count)
    _emit({"p": args.p, "spectrum": [{"eigenvalue": lam, "multiplicity": m} for lam, m in spec]})
    return 0


def cmd_eulerbound(args) -> int:
    from .euler import EulerMap, det_bound, gram_ee, kernel_basis, restricted_bound, restricted_eigenvalues, rho
    from .jacobi import eigvalsh
    from .lattice import GramMatrix

    m = EulerMap(_matrix(args.E, "--E"), _matrix(args.G, "--G"))
    fiber = GramMatrix(_matrix(args.fiber_gram, "--fiber-gram")) if args.fiber_gram else GramMatrix(np.eye(m.k))
    out = {"k": m.k, "b2": m.b2, "rank": m.rank, "kernel": kernel_basis(m), "rho": rho(m.G),
           "eigenvalues_ee": eigvalsh(gram_ee(m)).tolist()}
    if m.injective and not args.fiber_gram:
        out["det_bound"] = det_bound(m)
    try:
        out["restricted_bound"] = restricted_bound(m, fiber)
        out["restricted_lambda_min"] = float(restricted_eigenvalues(m, fiber)[0])
    except NotApplicable as exc:
        out["restricted_bound"] = None
        out["note"] = str(exc)
    _emit(out)
    return 0


def cmd_kunneth(args) -> int:
    from .euler import kunneth

    def vec(s):
        return [int(v) for v in s.split(",")]

    _emit({"betti": kunneth(vec(args.a), vec(args.b))})
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_all

    checks = run_all(seed=args.seed)
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    return 0 if all(c.passed for c in checks) else 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="experiment config (JSON)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help=f"worker threads (fallback: ${THREADS_ENV})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random property draws")

    p = argparse.ArgumentParser(prog="collapse-lab", description="Spectral experiments on collapsing principal torus bundles.", parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("sweep", parents=[common], help="run the experiments of a config")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("svp", parents=[common], help="shortest lattice vector of a Gram matrix")
    s.add_argument("--gram", required=True, help="JSON matrix, e.g. '[[1,0],[0,1]]'")
    s.add_argument("--oracle-box", type=int, default=0, help="cross-check against a box scan")
    s.set_defaults(func=cmd_svp)

    s = sub.add_parser("dioph", parents=[common], help="diophantine constant of a direction")
    s.add_argument("--kind", choices=("golden", "cubic", "custom"), default="golden")
    s.add_argument("--y", help="comma-separated y for --kind custom")
    s.add_argument("--Q", type=int, default=10_000)
    s.add_argument("--q-min", type=int, default=1)
    s.set_defaults(func=cmd_dioph)

    s = sub.add_parser("spectrum", parents=[common], help="flat-torus spectrum on p-forms")
    s.add_argument("--gram", required=True)
    s.add_argument("--count", type=int, default=5)
    s.add_argument("--p", type=int, default=0)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("eulerbound", parents=[common], help="e*e spectral lower bounds")
    s.add_argument("--E", required=True, help="JSON integer matrix, b2 x k")
    s.add_argument("--G", required=True, help="JSON harmonic Gram matrix, b2 x b2")
    s.add_argument("--fiber-gram", help="JSON fibre Gram matrix (default identity)")
    s.set_defaults(func=cmd_eulerbound)

    s = sub.add_parser("kunneth", parents=[common], help="Betti numbers of a product")
    s.add_argument("--a", required=True, help="comma-separated Betti vector")
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_kunneth)

    s = sub.add_parser("selftest", parents=[common], help="run the seeded property suite")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("config", None), ("out", "out"), ("threads", None), ("seed", 0)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.seed < 0 or args.seed >= 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 1
    func = getattr(args, "func", None)
    if func is None:
        if args.config:
            func = cmd_sweep
        else:
            parser.print_help()
            return 1
    try:
        return func(args)
    except (CollapseLabError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
