"""Run one generated batch per (kind, n, m) and write a single CSV report.

Example:
    python scripts/sweep.py --kinds ahsp bpbp --n-max 3 --m-max 4 --trials 20 --out sweep.csv
"""

import argparse
import sys
from fractions import Fraction

from bpbp.generators import ExperimentSpec, gen_near_attaining
from bpbp.harness import report_to_csv, run_batch

N_RANGE = {"bpbp": (2, 3), "roundtrip": (1, 4)}


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--kinds", nargs="+", default=["ahsp", "functional", "convex", "bpbp", "roundtrip"])
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--eps", type=Fraction, action="append")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    args = p.parse_args()
    eps = tuple(args.eps or [Fraction(1, 2), Fraction(1, 8)])
    instances = []
    for kind in args.kinds:
        lo, hi = N_RANGE.get(kind, (1, args.n_max))
        for n in range(lo, min(hi, args.n_max) + 1):
            for m in range(1, args.m_max + 1):
                instances += gen_near_attaining(ExperimentSpec(n=n, m=m, eps=eps, trials=args.trials,
                                                               seed=args.seed, kind=kind))
    rows = run_batch(instances, jobs=args.jobs)
    text = report_to_csv(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failures = sum(not r.ok for r in rows)
    print(f"{len(rows)} instances, {failures} failures", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
