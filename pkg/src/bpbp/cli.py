"""Command-line harness.

Reports are deterministic: the same arguments produce the same bytes.  The
exit status is 0 exactly when every verification in the run passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from .certificates import certificate_from_json, verify_any
from .generators import KINDS, ExperimentSpec, gen_near_attaining, instance_rng, random_tuple
from .harness import (
    REPORT_SCHEMA,
    instances_from_json,
    instances_to_json,
    report_to_csv,
    report_to_json,
    run_batch,
)
from .linf import enumerate_even_tuples, enumerate_odd_tuples, extreme_points_E1
from .moduli import modulus_chain
from .operators import in_M, operator_norm
from .oracles import brute_norm
from .serialize import domain_to_json, operator_from_json, operator_to_json, q

DEFAULT_EPS = [Fraction(1, 2)]


def rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from None
    if "." in text or "e" in text.lower():
        raise argparse.ArgumentTypeError(f"give epsilon exactly as p/q, not {text!r}")
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _operator(args):
    if args.input:
        d = _load(args.input)
        return operator_from_json(d.get("operator", d))
    rng = instance_rng(args.seed, "operator", args.n, args.m)
    return random_tuple(rng, args.n, args.m)


def cmd_enumerate(args) -> int:
    n = args.n
    odd, even, ext = enumerate_odd_tuples(n), enumerate_even_tuples(n), extreme_points_E1(n)
    if args.format == "csv":
        rows = [("odd", " ".join(map(str, t))) for t in odd]
        rows += [("even", " ".join(map(str, t))) for t in even]
        rows += [("ext_E1", " ".join(q(c) for c in v)) for v in ext]
        _emit(_csv(("family", "value"), rows), args.out)
    else:
        _emit(_dump({"schema": REPORT_SCHEMA, "command": "enumerate", "n": n,
                     "odd": [list(t) for t in odd], "even": [list(t) for t in even],
                     "ext_E1": [domain_to_json(v) for v in ext]}), args.out)
    return 0


def cmd_norm(args) -> int:
    op = _operator(args)
    fast = operator_norm(op)
    ok = True
    body = {"schema": REPORT_SCHEMA, "command": "norm", "operator": operator_to_json(op), "operator_norm": q(fast)}
    if op.n <= args.brute_max:
        slow = brute_norm(op)
        ok = slow == fast
        body.update(brute_norm=q(slow), agree=ok)
    if args.format == "csv":
        _emit(_csv(("operator_norm", "brute_norm", "agree", "approx_operator_norm"),
                   [(q(fast), body.get("brute_norm", ""), body.get("agree", ""), f"{float(fast):.6e}")]), args.out)
    else:
        _emit(_dump(body), args.out)
    return 0 if ok else 1


def cmd_check_m(args) -> int:
    op = _operator(args)
    inside = in_M(op)
    body = {"schema": REPORT_SCHEMA, "command": "check-m", "operator_norm": q(operator_norm(op)), "in_M": inside}
    if args.format == "csv":
        _emit(_csv(("operator_norm", "in_M"), [(body["operator_norm"], inside)]), args.out)
    else:
        _emit(_dump(body), args.out)
    return 0


def cmd_moduli(args) -> int:
    chains = [modulus_chain(n, e) for n in range(1, args.n + 1) for e in (args.eps or DEFAULT_EPS)]
    names = ("rho", "gamma_prime", "gamma", "nu", "eta")
    if args.format == "csv":
        rows = [(c.n, q(c.eps), *(q(getattr(c, k)) for k in names), *(f"{float(getattr(c, k)):.6e}" for k in names))
                for c in chains]
        _emit(_csv(("n", "eps", *names, *(f"approx_{k}" for k in names)), rows), args.out)
    else:
        _emit(_dump({"schema": REPORT_SCHEMA, "command": "moduli",
                     "rows": [{"n": c.n, "eps": q(c.eps), **{k: q(getattr(c, k)) for k in names}} for c in chains]}),
              args.out)
    return 0


def _spec(args, kind: str) -> ExperimentSpec:
    return ExperimentSpec(n=args.n, m=args.m, eps=tuple(args.eps or DEFAULT_EPS), trials=args.trials,
                          seed=args.seed, kind=kind, n0=getattr(args, "n0", None))


def _instances(args, kind: str):
    if args.input:
        insts = instances_from_json(_load(args.input))
        return [i for i in insts if i.kind == kind] if kind else insts
    return gen_near_attaining(_spec(args, kind))


def _batch(args, kind: str, command: str) -> int:
    insts = _instances(args, kind)
    rows = run_batch(insts, jobs=args.jobs, keep_certificates=args.certificates)
    params = {"n": args.n, "m": args.m, "eps": list(args.eps or DEFAULT_EPS), "trials": args.trials,
              "seed": args.seed, "kind": kind, "input": args.input}
    _emit(report_to_csv(rows) if args.format == "csv" else report_to_json(rows, command, params), args.out)
    failures = sum(not r.ok for r in rows)
    print(f"{command}: {len(rows)} instances, {failures} failures", file=sys.stderr)
    return 0 if failures == 0 else 1


def cmd_correct_ahsp(args) -> int:
    return _batch(args, args.variant, "correct-ahsp")


def cmd_correct_bpbp(args) -> int:
    return _batch(args, "bpbp", "correct-bpbp")


def cmd_roundtrip(args) -> int:
    return _batch(args, "roundtrip", "roundtrip")


def cmd_gen(args) -> int:
    spec = _spec(args, args.kind)
    _emit(_dump(instances_to_json(gen_near_attaining(spec), spec)), args.out)
    return 0


def _certificates(doc):
    """Certificates in a file: a single certificate or a report with embedded ones."""
    if doc.get("schema") == REPORT_SCHEMA:
        return [(r["id"], r["certificate"]) for r in doc.get("rows", []) if "certificate" in r]
    return [(doc.get("id", "certificate"), doc)]


def cmd_verify(args) -> int:
    if not args.input:
        raise SystemExit("verify needs --input PATH")
    results = []
    for ident, raw in _certificates(_load(args.input)):
        clauses = verify_any(certificate_from_json(raw))
        results.append((ident, clauses))
    failures = sum(not c.ok for _, cl in results for c in cl)
    if args.format == "csv":
        rows = [(ident, c.name, "pass" if c.ok else "FAIL", "approx" if c.approx else "exact", c.detail)
                for ident, cl in results for c in cl]
        _emit(_csv(("certificate", "clause", "status", "mode", "detail"), rows), args.out)
    else:
        _emit("".join(f"[{ident}] {c.line()}\n" for ident, cl in results for c in cl), args.out)
    print(f"verify: {len(results)} certificates, {failures} failed clauses", file=sys.stderr)
    return 0 if failures == 0 and results else 1


def cmd_bench(args) -> int:
    rows = []
    for n in range(1, args.n + 1):
        ops = [random_tuple(instance_rng(args.seed, "bench", n, t), n, args.m) for t in range(args.trials)]
        t0 = time.perf_counter()
        fast = [operator_norm(op) for op in ops]
        t1 = time.perf_counter()
        slow = [brute_norm(op) for op in ops] if n <= args.brute_max else None
        t2 = time.perf_counter()
        agree = "" if slow is None else fast == slow
        rows.append((n, args.m, args.trials, agree, f"{t1 - t0:.4f}", "" if slow is None else f"{t2 - t1:.4f}"))
    # timings vary run to run, so bench output is the one report that is not byte-stable
    _emit(_csv(("n", "m", "trials", "agree", "seconds_formula", "seconds_brute"), rows), args.out)
    return 0 if all(r[3] in (True, "") for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bpbp", description="Exact corrections of almost norm-attaining operators from l_inf^n to l1.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=2, m=3, trials=10):
        sp.add_argument("--n", type=int, default=n)
        sp.add_argument("--m", type=int, default=m)
        sp.add_argument("--eps", type=rational, action="append", help="p/q, repeatable")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--input", metavar="PATH")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--brute-max", type=int, default=16, help="largest n checked by brute force")
        return sp

    common(sub.add_parser("enumerate", help="odd/even index tuples and Ext(E1)")).set_defaults(fn=cmd_enumerate)
    common(sub.add_parser("norm", help="operator norm, checked against brute force")).set_defaults(fn=cmd_norm)
    common(sub.add_parser("check-m", help="membership in the unit ball M")).set_defaults(fn=cmd_check_m)
    common(sub.add_parser("moduli", help="rho/gamma/nu/eta tables for n = 1..N"), n=4).set_defaults(fn=cmd_moduli)

    sp = common(sub.add_parser("correct-ahsp", help="batch of l1 corrections"))
    sp.add_argument("--n0", type=int)
    sp.add_argument("--variant", choices=("ahsp", "functional", "convex"), default="ahsp")
    sp.add_argument("--certificates", action="store_true", help="embed certificates in the JSON report")
    sp.set_defaults(fn=cmd_correct_ahsp)
    for name, fn, helptext in (("correct-bpbp", cmd_correct_bpbp, "batch of norm-attaining corrections"),
                               ("roundtrip", cmd_roundtrip, "convex corrections through bpbp_correct")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--certificates", action="store_true", help="embed certificates in the JSON report")
        sp.set_defaults(fn=fn)

    sp = common(sub.add_parser("gen", help="write generated instances as JSON"))
    sp.add_argument("--kind", choices=KINDS, default="ahsp")
    sp.add_argument("--n0", type=int)
    sp.set_defaults(fn=cmd_gen)
    common(sub.add_parser("verify", help="re-check certificates from raw stored values")).set_defaults(fn=cmd_verify)
    common(sub.add_parser("bench", help="time the norm formula against brute force"), n=10, trials=50).set_defaults(fn=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
