"""Corrections of almost-attaining tuples in l1 to exactly attaining ones.

The core routine ``correct_positive`` works with the summing functional u*
and is recursive in n: the first n - 1 images are corrected at a much finer
accuracy, shrunk towards e_1, and the last image is either shrunk (when it
needs no attainment) or replaced by a positive vector built with
``auxiliar_w``.  The other entry points reduce to it: ``correct_for_functional``
through a sign flip and a cyclic rotation, ``correct_convex`` by choosing the
attainment set from a convex combination, ``truncation_lift`` by passing
through a finite section of l1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .certificates import CorrectionCertificate, all_ok, verify
from .errors import CorrectionError, HypothesisError
from .linf import as_rational, enumerate_even_tuples
from .moduli import gamma_prime, inner_epsilon, nu, rho, truncation_gamma
from .operators import (
    OperatorTuple,
    alternating_sum,
    flip_operator,
    in_M,
    operator_norm,
    tau_power,
)
from .sequence import (
    DualFunctional,
    TargetVector,
    coordinate_max,
    norm,
    positive_part,
    sign_functional,
    truncate,
    u_star,
    unit,
    zero,
)


def _require_l1(ys: OperatorTuple) -> None:
    if ys.ambient.kind != "l1":
        raise HypothesisError(f"corrections are implemented for l1 targets only, got {ys.ambient}")


def _require_M(ys: OperatorTuple) -> None:
    if not in_M(ys):
        raise HypothesisError(f"tuple is not in M: operator norm {operator_norm(ys)} > 1")


def _checked(cert: CorrectionCertificate, check: bool) -> CorrectionCertificate:
    cert.fill_evidence()
    if check:
        clauses = verify(cert)
        if not all_ok(clauses):
            failed = [c.line() for c in clauses if not c.ok]
            raise CorrectionError("postcondition failure: " + "; ".join(failed), clauses)
    return cert


def auxiliar_w(xs: Sequence[TargetVector], y: TargetVector, r, s) -> TargetVector:
    """A vector w >= y with x_i + w >= 0 for all i and ||w - y|| <= m(r + s).

    Requires 1 - r <= u*(x_i + y) and ||x_i + y|| <= 1 + s.  Each single
    constraint is met by max(y, -x_i), whose distance to y is the negative
    mass of x_i + y, i.e. (||x_i + y|| - u*(x_i + y))/2 <= (r + s)/2; w is
    the entrywise maximum of these, so the bound actually achieved is m(r + s)/2.
    """
    r, s = as_rational(r), as_rational(s)
    if r < 0 or s < 0:
        raise ValueError("r and s must be nonnegative")
    if not xs:
        raise ValueError("need at least one x_i")
    for i, x in enumerate(xs, start=1):
        v = x + y
        if u_star(v) < 1 - r:
            raise HypothesisError(f"index {i}: u*(x_i + y) = {u_star(v)} < 1 - r = {1 - r}")
        if norm(v) > 1 + s:
            raise HypothesisError(f"index {i}: ||x_i + y|| = {norm(v)} > 1 + s = {1 + s}")
    singles = [coordinate_max([y, -x]) for x in xs]
    return coordinate_max(singles)


def _positive(ys: OperatorTuple, n0: int, eps: Fraction) -> CorrectionCertificate:
    n = ys.n
    e1 = unit(1)
    if n == 1:
        a = positive_part(ys[0])
        z = a + (1 - norm(a)) * e1
        return CorrectionCertificate(
            kind="positive", eps=eps, inputs=ys, outputs=OperatorTuple([z]), attain=(1,),
            threshold=rho(1, eps), n0=1, moduli={"rho": rho(1, eps)}, trace={"level": 1, "a": a},
        )
    k = n - 1
    e_in = inner_epsilon(k, eps)
    inner = _positive(OperatorTuple(ys.images[:k]), min(n0, k), e_in)
    lam = 1 / (1 + eps / 8)
    zs = [lam * b + (1 - lam) * e1 for b in inner.outputs]
    trace = {"level": n, "stage_eps": e_in, "scale": lam}
    if n0 < n:
        zs.append(lam * ys[k])
        trace["case"] = 1
    else:
        a = positive_part(ys[k])
        xs = [alternating_sum(inner.outputs, t) for t in enumerate_even_tuples(k)]
        r, s = e_in, (k + 1) * e_in
        w = auxiliar_w(xs, a, r, s)
        zs.append(lam * w + (1 - lam * norm(w)) * e1)
        trace.update(case=2, a=a, w=w, r=r, s=s)
    trace["inner"] = inner
    return CorrectionCertificate(
        kind="positive", eps=eps, inputs=ys, outputs=OperatorTuple(zs), attain=tuple(range(1, n0 + 1)),
        threshold=rho(n, eps), n0=n0, moduli={"rho": rho(n, eps)}, trace=trace,
    )


def correct_positive(ys: OperatorTuple, n0: int, eps, check: bool = True) -> CorrectionCertificate:
    """Correct (y_i) in M with u*(y_i) > 1 - rho_n(eps) for i <= n0.

    The output (z_i) lies in M, ||z_i - y_i|| < eps for every i, and z_i >= 0
    with u*(z_i) = 1 for i <= n0.
    """
    eps = as_rational(eps)
    _require_l1(ys)
    n = ys.n
    if not 1 <= n0 <= n:
        raise ValueError(f"n0 must lie in 1..{n}, got {n0}")
    thr = rho(n, eps)
    _require_M(ys)
    for i in range(1, n0 + 1):
        v = u_star(ys[i - 1])
        if not v > 1 - thr:
            raise HypothesisError(f"u*(y_{i}) = {v} is not above 1 - rho_{n}(eps) = {1 - thr}")
    return _checked(_positive(ys, n0, eps), check)


def _attain_set(A, n: int) -> tuple[int, ...]:
    A = tuple(sorted(set(int(i) for i in A)))
    if not A or A[0] < 1 or A[-1] > n:
        raise ValueError(f"attainment set must be a nonempty subset of 1..{n}, got {A}")
    return A


def correct_for_functional(ys: OperatorTuple, A, f: DualFunctional, eps, check: bool = True) -> CorrectionCertificate:
    """Correct (y_i) in M with f(y_i) > 1 - rho_n(eps)/2 on A so that ||sum_A z_i|| = |A|.

    f must be a sign-vector functional.  Steps: flip signs so that f becomes
    u*, rotate with tau until min A sits at index 1, correct the interval
    1..max A with ``correct_positive``, rotate back and unflip.
    """
    eps = as_rational(eps)
    _require_l1(ys)
    if f.index is not None:
        raise ValueError("correct_for_functional needs a sign-vector functional")
    n = ys.n
    A = _attain_set(A, n)
    thr = gamma_prime(n, eps)
    _require_M(ys)
    for i in A:
        v = f(ys[i - 1])
        if not v > 1 - thr:
            raise HypothesisError(f"f(y_{i}) = {v} is not above 1 - rho_{n}(eps)/2 = {1 - thr}")
    k = A[0] - 1
    rotated = tau_power(flip_operator(ys, f), k)
    n0 = A[-1] - k
    r = rho(n, eps)
    for i in range(1, n0 + 1):
        if not u_star(rotated[i - 1]) > 1 - r:
            raise CorrectionError(f"interval extension failed at rotated index {i}")
    inner = _positive(rotated, n0, eps)
    inner.fill_evidence()
    zs = flip_operator(tau_power(inner.outputs, 2 * n - k), f)
    cert = CorrectionCertificate(
        kind="functional", eps=eps, inputs=ys, outputs=zs, attain=A, threshold=thr, functional=f,
        moduli={"rho": r, "gamma_prime": thr}, trace={"rotation": k, "extended_n0": n0, "inner": inner},
    )
    return _checked(cert, check)


def _convex_weights(alphas, n: int) -> tuple[Fraction, ...]:
    alphas = tuple(as_rational(a) for a in alphas)
    if len(alphas) != n or any(a < 0 for a in alphas) or sum(alphas) != 1:
        raise ValueError(f"need {n} nonnegative weights summing to 1, got {alphas}")
    return alphas


def correct_convex(ys: OperatorTuple, alphas, eps, check: bool = True) -> tuple[tuple[int, ...], CorrectionCertificate]:
    """Given ||sum alpha_i y_i|| > 1 - nu_n(eps), find C with sum_C alpha_i > 1 - eps
    and (z_i) in M, eps-close to (y_i), with ||sum_C z_i|| = |C|.

    C collects the indices where the norming sign functional of
    sum alpha_i y_i exceeds 1 - rho_n(eps)/2.
    """
    eps = as_rational(eps)
    _require_l1(ys)
    n = ys.n
    alphas = _convex_weights(alphas, n)
    thr = nu(n, eps)
    _require_M(ys)
    s = zero(ys.ambient)
    for a, y in zip(alphas, ys):
        s = s + a * y
    if not norm(s) > 1 - thr:
        raise HypothesisError(f"||sum alpha_i y_i|| = {norm(s)} is not above 1 - nu_n(eps) = {1 - thr}")
    f = sign_functional(s)
    gp = gamma_prime(n, eps)
    C = tuple(i for i in range(1, n + 1) if f(ys[i - 1]) > 1 - gp)
    if not C:
        raise CorrectionError("empty selection set")
    inner = correct_for_functional(ys, C, f, eps, check=False)
    cert = CorrectionCertificate(
        kind="convex", eps=eps, inputs=ys, outputs=inner.outputs, attain=C, threshold=thr, functional=f,
        alphas=alphas, moduli={"nu": thr, "gamma_prime": gp, "rho": rho(n, eps)},
        trace={"inner": inner},
    )
    return C, _checked(cert, check)


def truncation_lift(ys: OperatorTuple, A, f: DualFunctional, eps, m: int | None = None,
                    check: bool = True) -> CorrectionCertificate:
    """Correct through the section l1^m: truncate, shrink by 1/(1 + n t), correct at eps/2.

    The hypothesis is f(y_i) > 1 - Gamma_n(eps/2) on A with Gamma_n the
    sign-functional modulus.  t is half the admissible upper bound and m
    defaults to the largest support index, where truncation is exact.
    """
    eps = as_rational(eps)
    _require_l1(ys)
    if f.index is not None:
        raise ValueError("truncation_lift needs a sign-vector functional")
    n = ys.n
    A = _attain_set(A, n)
    g = truncation_gamma(n, eps)
    _require_M(ys)
    slack = [f(ys[i - 1]) - 1 + g for i in A]
    if min(slack) <= 0:
        raise HypothesisError(f"f(y_i) must exceed 1 - Gamma_n(eps/2) = {1 - g} on A")
    t = min(eps / 2, min(slack)) / (n + 1) / 2
    if m is None:
        m = max(ys.max_index(), 1)
    bs = [truncate(y, m) for y in ys]
    tails = [norm(b - y) for b, y in zip(bs, ys)]
    if max(tails) >= t:
        raise HypothesisError(f"truncation at m={m} loses mass {max(tails)} >= t = {t}")
    scaled = OperatorTuple(b / (1 + n * t) for b in bs)
    inner = correct_for_functional(scaled, A, f.restrict(m), eps / 2, check=False)
    cert = CorrectionCertificate(
        kind="truncation", eps=eps, inputs=ys, outputs=inner.outputs, attain=A, threshold=g, functional=f,
        moduli={"Gamma": g}, trace={"t": t, "m": m, "inner": inner},
    )
    return _checked(cert, check)
