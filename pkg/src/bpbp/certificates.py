"""Correction certificates and their independent re-verification.

``verify`` never reads recorded verdicts: every clause is recomputed from the
stored tuples.  Certificates for oracle ambients are checked within the
oracle tolerance and their clauses are tagged ``approx``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .linf import DomainVector, coefficient_gaps, recompose
from .operators import OperatorTuple, apply, distance, operator_norm
from .sequence import Approx, DualFunctional, norm, u_star, zero
from . import serialize as ser

SCHEMA = "bpbp-certificate/1"


@dataclass(frozen=True)
class Clause:
    name: str
    ok: bool
    detail: str = ""
    approx: bool = False

    def line(self) -> str:
        tag = " [approx]" if self.approx else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tag}: {self.detail}"


def all_ok(clauses: list[Clause]) -> bool:
    return all(c.ok for c in clauses)


def _tol(*values) -> float | None:
    tols = [v.tol for v in values if isinstance(v, Approx)]
    return max(tols) if tols else None


def _lt(a, b) -> tuple[bool, bool]:
    t = _tol(a, b)
    return (a < b, False) if t is None else (a < b + t, True)


def _le(a, b) -> tuple[bool, bool]:
    t = _tol(a, b)
    return (a <= b, False) if t is None else (a <= b + t, True)


def _eq(a, b) -> tuple[bool, bool]:
    t = _tol(a, b)
    return (a == b, False) if t is None else (abs(a - b) <= t, True)


def _fmt(x) -> str:
    if isinstance(x, Approx):
        return f"{float(x):.12g}±{x.tol:g}"
    if isinstance(x, Fraction):
        return str(x) if x.denominator < 10**12 else f"{float(x):.6g}"
    return str(x)


def _clause(name: str, test: tuple[bool, bool], detail: str) -> Clause:
    ok, approx = test
    return Clause(name, bool(ok), detail, approx)


@dataclass
class CorrectionCertificate:
    """Evidence of one l1 correction run.

    ``kind`` is one of ``positive`` (u*-normalised correction of the first n0
    images), ``functional`` (attainment on ``attain`` via a sign functional),
    ``convex`` (convex-combination form, ``attain`` is the selected set C),
    ``truncation`` (functional form through a finite-dimensional section) or
    ``roundtrip`` (convex form extracted from a BPBp procedure).
    ``threshold`` is the modulus value the hypothesis is checked against.
    """

    kind: str
    eps: Fraction
    inputs: OperatorTuple
    outputs: OperatorTuple
    attain: tuple[int, ...]
    threshold: Fraction
    n0: int | None = None
    functional: DualFunctional | None = None
    alphas: tuple[Fraction, ...] | None = None
    moduli: dict[str, Fraction] = field(default_factory=dict)
    trace: dict[str, Any] = field(default_factory=dict)
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.inputs.n

    def fill_evidence(self) -> CorrectionCertificate:
        self.evidence = correction_evidence(self)
        return self


def correction_evidence(cert: CorrectionCertificate) -> dict[str, Any]:
    zs, ys = cert.outputs, cert.inputs
    ev: dict[str, Any] = {
        "distances": [norm(z - y) for z, y in zip(zs, ys)],
        "output_norm": operator_norm(zs),
    }
    if cert.kind == "positive":
        ev["u_star"] = [u_star(zs[i - 1]) for i in cert.attain]
    else:
        total = zero(zs.ambient)
        for i in cert.attain:
            total = total + zs[i - 1]
        ev["attain_norm"] = norm(total)
    if cert.alphas is not None:
        ev["attain_mass"] = sum((cert.alphas[i - 1] for i in cert.attain), Fraction(0))
    return ev


def _hypothesis_clause(cert: CorrectionCertificate) -> Clause:
    ys, thr = cert.inputs, cert.threshold
    if cert.kind == "positive":
        vals = [u_star(ys[i - 1]) for i in range(1, cert.n0 + 1)]
        ok = all(v > 1 - thr for v in vals)
        return Clause("hypothesis", ok, f"min u*(y_i), i<=n0: {_fmt(min(vals))} vs 1 - {_fmt(thr)}")
    if cert.kind in ("functional", "truncation"):
        f = cert.functional
        vals = [f(ys[i - 1]) for i in cert.attain]
        ok = all(v > 1 - thr for v in vals)
        return Clause("hypothesis", ok, f"min f(y_i), i in A: {_fmt(min(vals))} vs 1 - {_fmt(thr)}")
    s = zero(ys.ambient)
    for a, y in zip(cert.alphas, ys):
        s = s + a * y
    v = norm(s)
    return _clause("hypothesis", _lt(1 - thr, v), f"||sum alpha_i y_i|| = {_fmt(v)} vs 1 - {_fmt(thr)}")


def verify(cert: CorrectionCertificate, prefix: str = "") -> list[Clause]:
    """Recompute every inequality of a correction certificate."""
    ys, zs, eps = cert.inputs, cert.outputs, cert.eps
    out: list[Clause] = []
    if ys.n != zs.n:
        return [Clause(prefix + "shape", False, f"{ys.n} inputs vs {zs.n} outputs")]
    if not cert.attain or any(not 1 <= i <= ys.n for i in cert.attain):
        out.append(Clause("attain_set", False, f"invalid set {cert.attain}"))
    else:
        out.append(_hypothesis_clause(cert))
    in_norm = operator_norm(ys)
    out.append(_clause("input_in_M", _le(in_norm, 1), f"||(y_i)|| = {_fmt(in_norm)}"))
    out_norm = operator_norm(zs)
    out.append(_clause("output_in_M", _le(out_norm, 1), f"||(z_i)|| = {_fmt(out_norm)}"))
    dists = [norm(z - y) for z, y in zip(zs, ys)]
    worst = max(range(len(dists)), key=lambda i: dists[i])
    out.append(_clause("closeness", (all(_lt(d, eps)[0] for d in dists), _lt(dists[worst], eps)[1]),
                       f"max ||z_i - y_i|| = {_fmt(dists[worst])} (i={worst + 1}) vs eps = {_fmt(eps)}"))
    if cert.kind == "positive":
        bad = [i for i in cert.attain if not zs[i - 1].is_nonnegative()]
        out.append(Clause("positivity", not bad, f"negative entries in z_i for i in {bad}" if bad else "z_i >= 0 for i <= n0"))
        masses = [u_star(zs[i - 1]) for i in cert.attain]
        off = [i for i, m in zip(cert.attain, masses) if m != 1]
        out.append(Clause("unit_mass", not off, f"u*(z_i) != 1 for i in {off}" if off else "u*(z_i) = 1 for i <= n0"))
    elif cert.attain:
        total = zero(zs.ambient)
        for i in cert.attain:
            total = total + zs[i - 1]
        v = norm(total)
        out.append(_clause("attainment", _eq(v, len(cert.attain)), f"||sum_A z_i|| = {_fmt(v)} vs |A| = {len(cert.attain)}"))
    if cert.alphas is not None:
        alphas = cert.alphas
        okw = len(alphas) == ys.n and all(a >= 0 for a in alphas) and sum(alphas) == 1
        out.append(Clause("convex_weights", okw, "alphas >= 0 summing to 1" if okw else f"bad weights {alphas}"))
        mass = sum((alphas[i - 1] for i in cert.attain if 1 <= i <= len(alphas)), Fraction(0))
        out.append(Clause("mass", mass > 1 - eps, f"sum_C alpha_i = {_fmt(mass)} vs 1 - eps = {_fmt(1 - eps)}"))
    if cert.kind == "roundtrip" and "beta" in cert.trace:
        out.extend(_coefficient_clauses(cert))
    if cert.evidence:
        out.append(_evidence_clause(cert.evidence, correction_evidence(cert)))
    for key in ("inner", "oracle"):
        sub = cert.trace.get(key)
        if isinstance(sub, CorrectionCertificate):
            out.extend(verify(sub, prefix=f"{key}."))
        elif isinstance(sub, BpbCertificate):
            out.extend(verify_bpb(sub, prefix=f"{key}."))
    return [Clause(prefix + c.name, c.ok, c.detail, c.approx) for c in out]


def _coefficient_clauses(cert: CorrectionCertificate) -> list[Clause]:
    alphas, beta = cert.alphas, tuple(cert.trace["beta"])
    x, y = recompose(alphas), recompose(beta)
    gaps = coefficient_gaps(x, y)
    bad = [(i, g, b) for i, g, b in gaps if g > b]
    d = (x - y).norm()
    stage = cert.eps / (cert.n + 1)
    out = [Clause("coefficient_stability", not bad,
                  f"|alpha_i - beta_i| within bounds (||x0 - u0|| = {_fmt(d)})" if not bad else f"violations {bad}")]
    mx = max(g for _, g, _ in gaps)
    out.append(Clause("coefficient_gap", d < stage and mx < stage,
                      f"max |alpha_i - beta_i| = {_fmt(mx)}, ||x0 - u0|| = {_fmt(d)} vs eps/(n+1) = {_fmt(stage)}"))
    zero_beta = [i for i in cert.attain if beta[i - 1] == 0]
    out.append(Clause("support", not zero_beta and set(cert.attain) == {i for i, b in enumerate(beta, 1) if b},
                      "C = {i : beta_i != 0}" if not zero_beta else f"beta vanishes on {zero_beta}"))
    return out


def _same(a, b) -> bool:
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        t = _tol(a, b) or 1e-12
        return abs(float(a) - float(b)) <= t
    return a == b


def _evidence_clause(recorded: dict, recomputed: dict) -> Clause:
    bad = [k for k in recomputed if k not in recorded or not _same(recorded[k], recomputed[k])]
    return Clause("evidence", not bad, "recorded evidence matches" if not bad else f"recorded values differ: {bad}")


@dataclass
class BpbCertificate:
    """A norm-attaining correction (S, u0) of (T, x0)."""

    eps: Fraction
    eta: Fraction
    T: OperatorTuple
    x0: DomainVector
    S: OperatorTuple
    u0: DomainVector
    method: str = "ahsp-transfer"
    trace: dict[str, Any] = field(default_factory=dict)
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.T.n

    def fill_evidence(self) -> BpbCertificate:
        self.evidence = bpb_evidence(self)
        return self


def bpb_evidence(c: BpbCertificate) -> dict[str, Any]:
    return {
        "S_norm": operator_norm(c.S),
        "S_u0_norm": norm(apply(c.S, c.u0)),
        "u0_dist": (c.u0 - c.x0).norm(),
        "S_dist": distance(c.S, c.T),
    }


def verify_bpb(c: BpbCertificate, prefix: str = "") -> list[Clause]:
    out: list[Clause] = []
    eps = c.eps
    t_norm = operator_norm(c.T)
    out.append(_clause("T_unit", _eq(t_norm, 1), f"||T|| = {_fmt(t_norm)}"))
    out.append(Clause("x0_unit", c.x0.norm() == 1, f"||x0|| = {_fmt(c.x0.norm())}"))
    tx = norm(apply(c.T, c.x0))
    out.append(_clause("hypothesis", _lt(1 - c.eta, tx), f"||T(x0)|| = {_fmt(tx)} vs 1 - eta = {_fmt(1 - c.eta)}"))
    s_norm = operator_norm(c.S)
    out.append(_clause("S_unit", _eq(s_norm, 1), f"||S|| = {_fmt(s_norm)}"))
    out.append(Clause("u0_unit", c.u0.norm() == 1, f"||u0|| = {_fmt(c.u0.norm())}"))
    su = norm(apply(c.S, c.u0))
    out.append(_clause("attainment", _eq(su, 1), f"||S(u0)|| = {_fmt(su)}"))
    d = (c.u0 - c.x0).norm()
    out.append(Clause("u0_close", d < eps, f"||u0 - x0|| = {_fmt(d)} vs eps = {_fmt(eps)}"))
    if c.method == "ahsp-transfer":
        bound = 2 * eps / (c.n + 1)
        out.append(Clause("u0_close_sharp", d < bound, f"||u0 - x0|| = {_fmt(d)} vs 2eps/(n+1) = {_fmt(bound)}"))
    sd = distance(c.S, c.T)
    out.append(_clause("S_close", _lt(sd, eps), f"||S - T|| = {_fmt(sd)} vs eps = {_fmt(eps)}"))
    if c.evidence:
        out.append(_evidence_clause(c.evidence, bpb_evidence(c)))
    sub = c.trace.get("inner")
    if isinstance(sub, CorrectionCertificate):
        out.extend(verify(sub, prefix="inner."))
    return [Clause(prefix + cl.name, cl.ok, cl.detail, cl.approx) for cl in out]


# --- JSON ---------------------------------------------------------------

_RATIONAL = re.compile(r"^-?\d+/\d+$")


def _enc(obj):
    if isinstance(obj, CorrectionCertificate):
        return {"$cert": correction_to_json(obj, top=False)}
    if isinstance(obj, BpbCertificate):
        return {"$bpb": bpb_to_json(obj, top=False)}
    if isinstance(obj, OperatorTuple):
        return {"$op": ser.operator_to_json(obj)}
    if isinstance(obj, DomainVector):
        return {"$dom": ser.domain_to_json(obj)}
    if isinstance(obj, DualFunctional):
        return {"$fun": ser.functional_to_json(obj)}
    if hasattr(obj, "entries") and hasattr(obj, "ambient"):
        return {"$vec": ser.vector_to_json(obj)}
    if isinstance(obj, Approx):
        return {"$approx": float(obj), "tol": obj.tol}
    if isinstance(obj, Fraction):
        return ser.q(obj)
    if isinstance(obj, dict):
        return {str(k): _enc(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_enc(v) for v in obj]
    return obj


def _dec(obj):
    if isinstance(obj, dict):
        if "$cert" in obj:
            return correction_from_json(obj["$cert"])
        if "$bpb" in obj:
            return bpb_from_json(obj["$bpb"])
        if "$op" in obj:
            return ser.operator_from_json(obj["$op"])
        if "$dom" in obj:
            return ser.domain_from_json(obj["$dom"])
        if "$fun" in obj:
            return ser.functional_from_json(obj["$fun"])
        if "$vec" in obj:
            return ser.vector_from_json(obj["$vec"])
        if "$approx" in obj:
            return Approx(obj["$approx"], obj["tol"])
        return {k: _dec(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_dec(v) for v in obj]
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return Fraction(obj)
    return obj


def correction_to_json(c: CorrectionCertificate, top: bool = True) -> dict:
    d = {
        "type": "correction",
        "kind": c.kind,
        "eps": ser.q(c.eps),
        "threshold": ser.q(c.threshold),
        "n0": c.n0,
        "attain": list(c.attain),
        "functional": None if c.functional is None else ser.functional_to_json(c.functional),
        "alphas": None if c.alphas is None else ser.rationals_to_json(c.alphas),
        "inputs": ser.operator_to_json(c.inputs),
        "outputs": ser.operator_to_json(c.outputs),
        "moduli": _enc(c.moduli),
        "evidence": _enc(c.evidence),
        "trace": _enc(c.trace),
    }
    return {"schema": SCHEMA, **d} if top else d


def correction_from_json(d: dict) -> CorrectionCertificate:
    return CorrectionCertificate(
        kind=d["kind"],
        eps=ser.unq(d["eps"]),
        threshold=ser.unq(d["threshold"]),
        n0=d.get("n0"),
        attain=tuple(int(i) for i in d["attain"]),
        functional=None if d.get("functional") is None else ser.functional_from_json(d["functional"]),
        alphas=None if d.get("alphas") is None else ser.rationals_from_json(d["alphas"]),
        inputs=ser.operator_from_json(d["inputs"]),
        outputs=ser.operator_from_json(d["outputs"]),
        moduli=_dec(d.get("moduli", {})),
        evidence=_dec(d.get("evidence", {})),
        trace=_dec(d.get("trace", {})),
    )


def bpb_to_json(c: BpbCertificate, top: bool = True) -> dict:
    d = {
        "type": "bpbp",
        "method": c.method,
        "eps": ser.q(c.eps),
        "eta": ser.q(c.eta),
        "T": ser.operator_to_json(c.T),
        "x0": ser.domain_to_json(c.x0),
        "S": ser.operator_to_json(c.S),
        "u0": ser.domain_to_json(c.u0),
        "evidence": _enc(c.evidence),
        "trace": _enc(c.trace),
    }
    return {"schema": SCHEMA, **d} if top else d


def bpb_from_json(d: dict) -> BpbCertificate:
    return BpbCertificate(
        eps=ser.unq(d["eps"]),
        eta=ser.unq(d["eta"]),
        T=ser.operator_from_json(d["T"]),
        x0=ser.domain_from_json(d["x0"]),
        S=ser.operator_from_json(d["S"]),
        u0=ser.domain_from_json(d["u0"]),
        method=d.get("method", "ahsp-transfer"),
        evidence=_dec(d.get("evidence", {})),
        trace=_dec(d.get("trace", {})),
    )


def certificate_to_json(c) -> dict:
    return bpb_to_json(c) if isinstance(c, BpbCertificate) else correction_to_json(c)


def certificate_from_json(d: dict):
    if d.get("schema") not in (None, SCHEMA):
        raise ValueError(f"unsupported schema {d.get('schema')!r}")
    if d.get("type") == "bpbp":
        return bpb_from_json(d)
    if d.get("type") == "correction":
        return correction_from_json(d)
    raise ValueError(f"unknown certificate type {d.get('type')!r}")


def verify_any(c) -> list[Clause]:
    return verify_bpb(c) if isinstance(c, BpbCertificate) else verify(c)


encode = _enc
decode = _dec
