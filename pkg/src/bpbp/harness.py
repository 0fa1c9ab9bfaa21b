"""Batch execution: run generated instances, verify, and collect report rows."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from .ahsp import auxiliar_w, correct_convex, correct_for_functional, correct_positive
from .bpbp import ahsp_from_bpbp, bpbp_correct
from .certificates import all_ok, certificate_to_json, decode, encode, verify_any
from .errors import CorrectionError, HypothesisError
from .generators import ExperimentSpec, Instance, gen_near_attaining
from .moduli import modulus_chain
from .sequence import norm
from .serialize import q

REPORT_SCHEMA = "bpbp-report/1"
INSTANCES_SCHEMA = "bpbp-instances/1"


@dataclass
class ReportRow:
    id: str
    kind: str
    n: int
    m: int
    eps: Fraction
    rho: Fraction
    gamma: Fraction
    nu: Fraction
    eta: Fraction
    max_dist: Fraction | None = None
    u0_dist: Fraction | None = None
    S_dist: Fraction | None = None
    attain: tuple[int, ...] = ()
    ok: bool = False
    failed: list[str] = field(default_factory=list)
    certificate: Any = None


def run_instance(inst: Instance):
    """Run the procedure an instance was generated for; returns its certificate."""
    d = inst.data
    if inst.kind == "ahsp":
        return correct_positive(d["ys"], d["n0"], inst.eps, check=False)
    if inst.kind == "functional":
        return correct_for_functional(d["ys"], d["A"], d["f"], inst.eps, check=False)
    if inst.kind == "convex":
        return correct_convex(d["ys"], d["alphas"], inst.eps, check=False)[1]
    if inst.kind == "roundtrip":
        return ahsp_from_bpbp(bpbp_correct, d["ys"], d["alphas"], inst.eps, check=False)[1]
    if inst.kind == "bpbp":
        return bpbp_correct(d["T"], d["x0"], inst.eps, check=False)
    raise ValueError(f"no procedure for instance kind {inst.kind!r}")


def auxiliar_clauses(xs, y, r, s) -> dict[str, bool]:
    """Postconditions of ``auxiliar_w`` recomputed from its output."""
    w = auxiliar_w(xs, y, r, s)
    m = len(xs)
    dist = norm(w - y)
    return {
        "dominates": w.dominates(y),
        "nonnegative": all((x + w).is_nonnegative() for x in xs),
        "bound": dist <= m * (r + s),
        "sharp_bound": dist <= m * (r + s) / 2,
    }


def evaluate(inst: Instance, keep_certificate: bool = False) -> ReportRow:
    ch = modulus_chain(inst.n, inst.eps)
    row = ReportRow(inst.id, inst.kind, inst.n, inst.m, inst.eps, ch.rho, ch.gamma, ch.nu, ch.eta)
    if inst.kind == "auxiliar":
        d = inst.data
        flags = auxiliar_clauses(d["xs"], d["y"], d["r"], d["s"])
        row.failed = [k for k, v in flags.items() if not v]
        row.ok = not row.failed
        return row
    try:
        cert = run_instance(inst)
    except (HypothesisError, CorrectionError) as exc:
        row.failed = [f"error: {exc}"]
        return row
    clauses = verify_any(cert)
    row.ok = all_ok(clauses)
    row.failed = [c.name for c in clauses if not c.ok]
    if inst.kind == "bpbp":
        row.u0_dist = cert.evidence["u0_dist"]
        row.S_dist = cert.evidence["S_dist"]
        row.attain = tuple(cert.trace["C"])
    else:
        row.max_dist = max(cert.evidence["distances"])
        row.attain = tuple(cert.attain)
    if keep_certificate:
        row.certificate = cert
    return row


def _evaluate_keep(inst: Instance) -> ReportRow:
    return evaluate(inst, keep_certificate=True)


def run_batch(instances: list[Instance], jobs: int = 1, keep_certificates: bool = False) -> list[ReportRow]:
    """Evaluate every instance; rows come back ordered by instance id."""
    fn = _evaluate_keep if keep_certificates else evaluate
    if jobs > 1 and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(fn, instances, chunksize=max(1, len(instances) // (4 * jobs))))
    else:
        rows = [fn(i) for i in instances]
    return sorted(rows, key=lambda r: r.id)


def run_spec(spec: ExperimentSpec, jobs: int = 1, keep_certificates: bool = False) -> list[ReportRow]:
    return run_batch(gen_near_attaining(spec), jobs, keep_certificates)


# --- serialization ----------------------------------------------------

def instances_to_json(instances: list[Instance], spec: ExperimentSpec | None = None) -> dict:
    out = {"schema": INSTANCES_SCHEMA}
    if spec is not None:
        out["spec"] = encode(asdict(spec))
    out["instances"] = [
        {"id": i.id, "kind": i.kind, "n": i.n, "m": i.m, "eps": q(i.eps), "data": encode(i.data), "meta": encode(i.meta)}
        for i in instances
    ]
    return out


def instances_from_json(d: dict) -> list[Instance]:
    if d.get("schema") != INSTANCES_SCHEMA:
        raise ValueError(f"unsupported instance schema {d.get('schema')!r}")
    return [
        Instance(r["id"], r["kind"], r["n"], r["m"], Fraction(r["eps"]), decode(r["data"]), decode(r.get("meta", {})))
        for r in d["instances"]
    ]


_COLUMNS = ("id", "kind", "n", "m", "eps", "rho", "gamma", "nu", "eta", "max_dist", "u0_dist", "S_dist", "attain", "ok", "failed")
_RATIONAL_COLUMNS = ("eps", "rho", "gamma", "nu", "eta", "max_dist", "u0_dist", "S_dist")


def _qq(x):
    return None if x is None else q(x)


def row_to_json(row: ReportRow) -> dict:
    d = {c: getattr(row, c) for c in _COLUMNS}
    for c in _RATIONAL_COLUMNS:
        d[c] = _qq(d[c])
    d["attain"] = list(row.attain)
    if row.certificate is not None:
        d["certificate"] = certificate_to_json(row.certificate)
    return d


def report_to_json(rows: list[ReportRow], command: str, params: dict | None = None) -> str:
    body = {
        "schema": REPORT_SCHEMA,
        "command": command,
        "params": encode(params or {}),
        "summary": {"instances": len(rows), "failures": sum(not r.ok for r in rows)},
        "rows": [row_to_json(r) for r in rows],
    }
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


def report_to_csv(rows: list[ReportRow]) -> str:
    """CSV with exact "p/q" columns plus ``approx_*`` decimal columns for reading only."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*_COLUMNS, *(f"approx_{c}" for c in _RATIONAL_COLUMNS)])
    for r in rows:
        d = row_to_json(r)
        exact = [" ".join(map(str, d[c])) if c == "attain" else ";".join(d[c]) if c == "failed" else d[c]
                 for c in _COLUMNS]
        approx = ["" if getattr(r, c) is None else f"{float(getattr(r, c)):.6e}" for c in _RATIONAL_COLUMNS]
        w.writerow(["" if v is None else v for v in exact] + approx)
    return buf.getvalue()
