"""Print rho, gamma', gamma, nu, eta for n = 1..N as exact rationals and decimals."""

import argparse
from fractions import Fraction

from bpbp.moduli import modulus_chain

NAMES = ("rho", "gamma_prime", "gamma", "nu", "eta")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--eps", type=Fraction, action="append")
    args = p.parse_args()
    print(f"{'n':>2} {'eps':>6} " + " ".join(f"{k:>12}" for k in NAMES))
    for eps in args.eps or [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]:
        for n in range(1, args.n + 1):
            c = modulus_chain(n, eps)
            print(f"{n:>2} {str(eps):>6} " + " ".join(f"{float(getattr(c, k)):12.4e}" for k in NAMES))


if __name__ == "__main__":
    main()
