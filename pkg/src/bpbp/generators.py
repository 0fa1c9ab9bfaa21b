"""Seeded generators of hypothesis-satisfying instances.

The moduli are far too small for rejection sampling, so instances are built
around an exactly attaining tuple and pulled slightly towards a random member
of M; convexity of M keeps the result inside.  Attaining tuples are made of
complementary coordinate pairs (q t_i, q (1 - t_i)) with t monotone in i,
which makes every odd alternating sum nonnegative with unit mass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .linf import DomainVector, basis_decompose, recompose
from .moduli import eta, gamma_prime, nu, rho
from .operators import OperatorTuple, apply, compose_domain, flip_operator, in_M, operator_norm, tau_power
from .sequence import DualFunctional, TargetVector, norm, u_star, zero
from .bpbp import DomainIsometry

KINDS = ("ahsp", "functional", "convex", "roundtrip", "bpbp", "auxiliar", "random")


@dataclass(frozen=True)
class ExperimentSpec:
    """Parameters of a batch; the seed fixes every generated instance."""

    n: int
    m: int
    eps: tuple[Fraction, ...] = (Fraction(1, 2),)
    trials: int = 10
    seed: int = 0
    kind: str = "ahsp"
    n0: int | None = None
    max_den: int = 12

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.n < 1 or self.m < 1 or self.trials < 0:
            raise ValueError("n, m must be positive and trials nonnegative")
        if self.n0 is not None and not 1 <= self.n0 <= self.n:
            raise ValueError("n0 must lie in 1..n")


@dataclass
class Instance:
    id: str
    kind: str
    n: int
    m: int
    eps: Fraction
    data: dict[str, Any]
    meta: dict[str, Any] = field(default_factory=dict)


def instance_rng(seed: int, *key) -> random.Random:
    return random.Random(":".join(str(k) for k in (seed, *key)))


def random_rational(rng: random.Random, lo: int = -1, hi: int = 1, max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_fraction01(rng: random.Random, steps: int = 1000) -> Fraction:
    """Uniform-ish rational in the open interval (0, 1)."""
    return Fraction(rng.randint(1, steps - 1), steps)


def random_vector(rng: random.Random, m: int, max_den: int = 12) -> TargetVector:
    return TargetVector([random_rational(rng, max_den=max_den) for _ in range(m)])


def random_tuple(rng: random.Random, n: int, m: int, max_den: int = 12) -> OperatorTuple:
    return OperatorTuple(random_vector(rng, m, max_den) for _ in range(n))


def random_M_tuple(rng: random.Random, n: int, m: int, max_den: int = 12) -> OperatorTuple:
    d = random_tuple(rng, n, m, max_den)
    r = operator_norm(d)
    return d / r if r > 1 else d


def random_convex_weights(rng: random.Random, n: int, support: list[int] | None = None) -> tuple[Fraction, ...]:
    support = support or list(range(1, n + 1))
    raw = {i: rng.randint(1, 20) for i in support}
    total = sum(raw.values())
    return tuple(Fraction(raw.get(i, 0), total) for i in range(1, n + 1))


def random_signs(rng: random.Random, m: int) -> DualFunctional:
    return DualFunctional(rng.choice((1, -1)), frozenset(k for k in range(1, m + 1) if rng.random() < 0.5))


def attaining_tuple(rng: random.Random, n: int, m: int) -> OperatorTuple:
    """(z_i) in M with z_i >= 0 and u*(z_i) = 1 for every i."""
    pairs = m // 2
    weights = [rng.randint(1, 10) for _ in range(pairs + m % 2)]
    total = sum(weights)
    cols: list[list[Fraction]] = []
    for j in range(pairs):
        q = Fraction(weights[j], total)
        ts = sorted(Fraction(rng.randint(0, 8), 8) for _ in range(n))
        if rng.random() < 0.5:
            ts.reverse()
        cols.append([q * t for t in ts])
        cols.append([q * (1 - t) for t in ts])
    if m % 2:
        cols.append([Fraction(weights[-1], total)] * n)
    order = list(range(m))
    rng.shuffle(order)
    z = OperatorTuple(TargetVector({order[c] + 1: cols[c][i] for c in range(m)}) for i in range(n))
    assert in_M(z) and all(y.is_nonnegative() and u_star(y) == 1 for y in z)
    return z


def free_tail(rng: random.Random, z: OperatorTuple, keep: set[int], m: int, max_den: int = 12) -> OperatorTuple:
    """Replace images outside ``keep`` by random vectors, shrinking toward z until in M."""
    lam = Fraction(1)
    for _ in range(7):
        cand = [y if i in keep else (1 - lam) * y + lam * random_vector(rng, m, max_den)
                for i, y in enumerate(z, start=1)]
        op = OperatorTuple(cand)
        if in_M(op):
            return op
        lam /= 2
    return z


def _mix(z: OperatorTuple, d: OperatorTuple, theta: Fraction) -> OperatorTuple:
    return (1 - theta) * z + theta * d


def gen_ahsp(rng: random.Random, n: int, m: int, eps: Fraction, n0: int | None = None,
             max_den: int = 12) -> dict:
    """Input for ``correct_positive``: u*(y_i) > 1 - rho_n(eps) for i <= n0."""
    n0 = n0 or rng.randint(1, n)
    z = free_tail(rng, attaining_tuple(rng, n, m), set(range(1, n0 + 1)), m, max_den)
    r = rho(n, eps)
    theta = r / 2 * random_fraction01(rng)
    ys = _mix(z, random_M_tuple(rng, n, m, max_den), theta)
    assert in_M(ys) and all(u_star(ys[i]) > 1 - r for i in range(n0))
    return {"ys": ys, "n0": n0, "meta": {"theta": theta, "rho": r}}


def gen_functional(rng: random.Random, n: int, m: int, eps: Fraction, max_den: int = 12) -> dict:
    """Input for ``correct_for_functional``: f(y_i) > 1 - rho_n(eps)/2 on A, f a random sign vector."""
    block = rng.randint(1, n)
    start = rng.randint(1, n - block + 1)
    z = free_tail(rng, attaining_tuple(rng, n, m), set(range(1, block + 1)), m, max_den)
    g = gamma_prime(n, eps)
    theta = g / 2 * random_fraction01(rng)
    ys = _mix(z, random_M_tuple(rng, n, m, max_den), theta)
    ys = tau_power(ys, 2 * n - (start - 1))
    window = list(range(start, start + block))
    A = sorted({window[0], window[-1]} | {i for i in window if rng.random() < 0.5})
    f = random_signs(rng, m)
    ys = flip_operator(ys, f)
    assert in_M(ys) and all(f(ys[i - 1]) > 1 - g for i in A)
    return {"ys": ys, "A": A, "f": f, "meta": {"theta": theta, "gamma_prime": g}}


def gen_convex(rng: random.Random, n: int, m: int, eps: Fraction, threshold: Fraction | None = None,
               max_den: int = 12) -> dict:
    """Input for ``correct_convex``: ||sum alpha_i y_i|| > 1 - threshold (default nu_n(eps))."""
    thr = nu(n, eps) if threshold is None else threshold
    support = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
    alphas = random_convex_weights(rng, n, support)
    z = free_tail(rng, attaining_tuple(rng, n, m), set(support), m, max_den)
    theta = thr / 2 * random_fraction01(rng)
    ys = _mix(z, random_M_tuple(rng, n, m, max_den), theta)
    f = random_signs(rng, m)
    ys = flip_operator(ys, f)
    s = zero(ys.ambient)
    for a, y in zip(alphas, ys):
        s = s + a * y
    assert in_M(ys) and norm(s) > 1 - thr
    return {"ys": ys, "alphas": alphas, "meta": {"theta": theta, "threshold": thr}}


def random_isometry(rng: random.Random, n: int) -> DomainIsometry:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return DomainIsometry(tuple(rng.choice((1, -1)) for _ in range(n)), tuple(perm))


def gen_bpbp(rng: random.Random, n: int, m: int, eps: Fraction, max_den: int = 12) -> dict:
    """Input for ``bpbp_correct``: ||T|| = 1, ||x0|| = 1, ||T(x0)|| > 1 - eta_n(eps)."""
    e = eta(n, eps)
    S0 = attaining_tuple(rng, n, m)
    alphas = random_convex_weights(rng, n, sorted(rng.sample(range(1, n + 1), rng.randint(1, n))))
    u0 = recompose(alphas)
    theta = e / 4 * random_fraction01(rng)
    T1 = _mix(S0, random_M_tuple(rng, n, m, max_den), theta)
    T = T1 / operator_norm(T1)
    delta = e / 4 * random_fraction01(rng)
    coords = [Fraction(1)] + [min(Fraction(1), max(Fraction(-1), c + delta * random_rational(rng)))
                              for c in u0.coords[1:]]
    x0 = DomainVector(coords)
    J = random_isometry(rng, n)
    T = flip_operator(compose_domain(T, J.inverse()), random_signs(rng, m))
    x0 = J(x0)
    assert operator_norm(T) == 1 and x0.norm() == 1 and norm(apply(T, x0)) > 1 - e
    return {"T": T, "x0": x0, "meta": {"theta": theta, "delta": delta, "eta": e}}


def gen_auxiliar(rng: random.Random, count: int, m: int, max_den: int = 12) -> dict:
    """(xs, y, r, s) satisfying 1 - r <= u*(x_i + y) and ||x_i + y|| <= 1 + s."""
    y = random_vector(rng, m, max_den)
    xs = [random_vector(rng, m, max_den) for _ in range(count)]
    r = max(Fraction(0), 1 - min(u_star(x + y) for x in xs)) + random_fraction01(rng, 10) * rng.randint(0, 1)
    s = max(Fraction(0), max(norm(x + y) for x in xs) - 1) + random_fraction01(rng, 10) * rng.randint(0, 1)
    return {"xs": xs, "y": y, "r": r, "s": s}


def gen_near_attaining(spec: ExperimentSpec) -> list[Instance]:
    """``spec.trials`` instances for every epsilon, in a seed-determined order."""
    out = []
    for eps in spec.eps:
        for t in range(spec.trials):
            iid = f"{spec.kind}-n{spec.n}-m{spec.m}-e{eps.numerator}_{eps.denominator}-{t:04d}"
            rng = instance_rng(spec.seed, iid)
            if spec.kind == "ahsp":
                data = gen_ahsp(rng, spec.n, spec.m, eps, spec.n0, spec.max_den)
            elif spec.kind == "functional":
                data = gen_functional(rng, spec.n, spec.m, eps, spec.max_den)
            elif spec.kind == "convex":
                data = gen_convex(rng, spec.n, spec.m, eps, max_den=spec.max_den)
            elif spec.kind == "roundtrip":
                data = gen_convex(rng, spec.n, spec.m, eps, eta(spec.n, eps / (spec.n + 1)), spec.max_den)
            elif spec.kind == "bpbp":
                data = gen_bpbp(rng, spec.n, spec.m, eps, spec.max_den)
            elif spec.kind == "auxiliar":
                data = {**gen_auxiliar(rng, rng.randint(1, 4), spec.m, spec.max_den), "meta": {}}
            else:
                data = {"ys": random_tuple(rng, spec.n, spec.m, spec.max_den), "meta": {}}
            meta = data.pop("meta")
            out.append(Instance(iid, spec.kind, spec.n, spec.m, eps, data, meta))
    return out
