"""Run experiments and write samples.csv / report.json."""
from __future__ import annotations

import csv
import io
import json
import os
from typing import List

from . import __version__
from .collapse import SAMPLE_FIELDS, CollapseReport, sweep
from .config import Experiment


def check_assertions(exp: Experiment, report: CollapseReport) -> List[dict]:
    results = []
    if exp.sandwich:
        ok = report.sandwich_ok()
        chain_ok = report.chain_spread <= exp.chain_factor
        results.append({
            "name": "sandwich",
            "passed": bool(ok and chain_ok),
            "bounds_ordered": bool(ok),
            "chain_spread": report.chain_spread,
            "chain_factor": exp.chain_factor,
        })
    for s in exp.slopes:
        fit = report.fits.get(s.field)
        slope = None if fit is None else fit.slope
        passed = fit is not None and abs(fit.slope - s.expected) <= s.tol
        results.append({"name": f"slope:{s.field}", "passed": bool(passed), "slope": slope,
                         "expected": s.expected, "tol": s.tol})
    return results


def samples_csv(report: CollapseReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SAMPLE_FIELDS)
    for s in report.samples:
        w.writerow([repr(float(getattr(s, f))) for f in SAMPLE_FIELDS])
    return buf.getvalue()


def report_json(exp: Experiment, report: CollapseReport, assertions: List[dict]) -> str:
    d = report.to_dict()
    fam = exp.family
    d.update({
        "name": exp.name,
        "tool_version": __version__,
        "preset": exp.preset,
        "direction": dict(d["direction"], y=[float(v) for v in fam.direction.y], dioph_Q=exp.dioph_Q),
        "euler": {"E": [list(r) for r in fam.euler.E], "G": fam.euler.G.entries.tolist(), "rank": fam.euler.rank},
        "base": {"vol_N": fam.base.vol_N, "lambda01_N": fam.base.lambda01_N, "lambda11_N": fam.base.lambda11_N,
                 "betti": list(fam.base.betti), "a": fam.base.curvature_bound, "d": fam.base.diameter},
        "assertions": assertions,
        "passed": all(a["passed"] for a in assertions),
    })
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def run_experiment(exp: Experiment, out_dir: str, threads: int = 1) -> bool:
    """Run one sweep, write its two artifacts, return whether all assertions hold."""
    report = sweep(exp.family, threads=threads, dioph_Q=exp.dioph_Q)
    assertions = check_assertions(exp, report)
    csv_text = samples_csv(report)
    json_text = report_json(exp, report, assertions)
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "samples.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8", newline="") as fh:
        fh.write(json_text)
    return all(a["passed"] for a in assertions)
