"""Transfer between the hyperplane-sum corrections and norm-attaining operators.

``bpbp_correct`` turns an almost norm-attaining pair (T, x0) into an exactly
norm-attaining pair (S, u0) nearby.  ``ahsp_from_bpbp`` runs the converse
direction: given any such procedure it produces convex-form corrections, and
with ``bpbp_correct`` plugged in it serves as a round-trip check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .ahsp import _checked as _checked_correction, _convex_weights, correct_convex
from .certificates import BpbCertificate, CorrectionCertificate, all_ok, verify_bpb
from .errors import CorrectionError, HypothesisError
from .linf import DomainVector, as_rational, basis_decompose, in_convex_hull_B, recompose
from .moduli import eta
from .operators import OperatorTuple, apply, compose_domain, in_M, operator_norm
from .sequence import norm, zero


@dataclass(frozen=True)
class DomainIsometry:
    """x -> (signs[i] * x(perm[i]))_i on l_inf^n, perm 1-based."""

    signs: tuple[int, ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if len(self.signs) != n or sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError("perm must be a permutation of 1..n matching signs")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> DomainIsometry:
        return cls((1,) * n, tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, x: DomainVector) -> DomainVector:
        return DomainVector(s * x[p - 1] for s, p in zip(self.signs, self.perm))

    def inverse(self) -> DomainIsometry:
        signs = [0] * self.n
        perm = [0] * self.n
        for i, (s, p) in enumerate(zip(self.signs, self.perm), start=1):
            perm[p - 1] = i
            signs[p - 1] = s
        return DomainIsometry(tuple(signs), tuple(perm))

    def then(self, other: DomainIsometry) -> DomainIsometry:
        """other after self."""
        signs = tuple(other.signs[i] * self.signs[other.perm[i] - 1] for i in range(self.n))
        perm = tuple(self.perm[other.perm[i] - 1] for i in range(self.n))
        return DomainIsometry(signs, perm)

    def as_dict(self) -> dict:
        return {"signs": list(self.signs), "perm": list(self.perm)}


def normalize_to_O(x0: DomainVector) -> tuple[DomainIsometry, DomainVector]:
    """An isometry J with J(x0) in O_n.

    The first coordinate of modulus one is swapped to the front, the whole
    vector is negated if that coordinate is -1, and coordinates 2..n are
    stably sorted in nondecreasing order.
    """
    if x0.norm() != 1:
        raise ValueError(f"x0 must have unit sup-norm, got {x0.norm()}")
    n = x0.n
    p = next(i for i in range(1, n + 1) if abs(x0[i - 1]) == 1)
    perm = list(range(1, n + 1))
    perm[0], perm[p - 1] = p, 1
    sign = 1 if x0[p - 1] == 1 else -1
    J = DomainIsometry((sign,) * n, tuple(perm))
    y = J(x0)
    order = sorted(range(2, n + 1), key=lambda i: y[i - 1])
    J = J.then(DomainIsometry((1,) * n, (1, *order)))
    return J, J(x0)


def face_project(op: OperatorTuple, y: DomainVector, x: DomainVector, eps) -> DomainVector:
    """Move a norming point y near x in co(B_n) to a norming point of co(B_n), still eps-close to x.

    Coordinates where y is -1 up to the last such index become -1, those from
    the first index where y is +1 become +1, coordinate 1 becomes 1 and the
    rest copy x.
    """
    eps = as_rational(eps)
    n = op.n
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if y.n != n or x.n != n:
        raise ValueError("dimension mismatch")
    if operator_norm(op) != 1:
        raise HypothesisError("operator must have norm 1")
    if y.norm() != 1 or norm(apply(op, y)) != 1:
        raise HypothesisError("operator must attain its norm at the unit vector y")
    if not in_convex_hull_B(x):
        raise HypothesisError("x must lie in co(B_n)")
    if not (y - x).norm() < eps:
        raise HypothesisError(f"||y - x|| = {(y - x).norm()} is not below eps = {eps}")
    low = max([i for i in range(2, n + 1) if y[i - 1] == -1], default=1)
    high = min([i for i in range(2, n + 1) if y[i - 1] == 1], default=n + 1)
    coords = []
    for i in range(1, n + 1):
        if i == 1 or i >= high:
            coords.append(Fraction(1))
        elif i <= low:
            coords.append(Fraction(-1))
        else:
            coords.append(x[i - 1])
    z = DomainVector(coords)
    if not (in_convex_hull_B(z) and norm(apply(op, z)) == 1 and (z - x).norm() < eps):
        raise CorrectionError("face projection failed its postconditions")
    return z


def bpbp_correct(T: OperatorTuple, x0: DomainVector, eps, check: bool = True) -> BpbCertificate:
    """Norm-attaining (S, u0) with ||S - T|| < eps and ||u0 - x0|| < eps.

    Requires ||T|| = 1 exactly, ||x0|| = 1 and ||T(x0)|| > 1 - eta_n(eps).
    """
    eps = as_rational(eps)
    if T.ambient.kind != "l1":
        raise HypothesisError(f"bpbp_correct handles l1 targets only, got {T.ambient}")
    n = T.n
    if x0.n != n:
        raise ValueError("dimension mismatch")
    if operator_norm(T) != 1:
        raise HypothesisError(f"T must have norm exactly 1, got {operator_norm(T)}")
    if x0.norm() != 1:
        raise HypothesisError(f"x0 must have unit norm, got {x0.norm()}")
    thr = eta(n, eps)
    achieved = norm(apply(T, x0))
    if not achieved > 1 - thr:
        raise HypothesisError(f"||T(x0)|| = {achieved} is not above 1 - eta_n(eps) = {1 - thr}")
    J, x0n = normalize_to_O(x0)
    Jinv = J.inverse()
    Tn = compose_domain(T, Jinv)
    alphas = basis_decompose(x0n)
    stage = eps / (n + 1)
    C, inner = correct_convex(Tn, alphas, stage, check=False)
    mass = sum(alphas[i - 1] for i in C)
    u0n = recompose([alphas[i - 1] / mass if i in C else 0 for i in range(1, n + 1)])
    S = compose_domain(inner.outputs, J)
    u0 = Jinv(u0n)
    cert = BpbCertificate(
        eps=eps, eta=thr, T=T, x0=x0, S=S, u0=u0,
        trace={"isometry": J.as_dict(), "x0_normalized": x0n, "alphas": list(alphas), "C": list(C),
               "stage_eps": stage, "inner": inner},
    )
    cert.fill_evidence()
    if check:
        clauses = verify_bpb(cert)
        if not all_ok(clauses):
            raise CorrectionError("postcondition failure: " + "; ".join(c.line() for c in clauses if not c.ok), clauses)
    return cert


BpbOracle = Callable[[OperatorTuple, DomainVector, Fraction], BpbCertificate]


def ahsp_from_bpbp(oracle: BpbOracle, ys: OperatorTuple, alphas, eps,
                   check: bool = True) -> tuple[tuple[int, ...], CorrectionCertificate]:
    """Convex-form correction obtained from a norm-attaining correction procedure.

    Requires ||sum alpha_i y_i|| > 1 - eta_n(eps/(n+1)).  The oracle is called
    on (T/||T||, x0, eps/(n+1)) with x0 = sum alpha_i v_i; its norming point is
    moved into co(B_n) and C is the support of the resulting coefficients.
    """
    eps = as_rational(eps)
    n = ys.n
    alphas = _convex_weights(alphas, n)
    if not ys.ambient.exact:
        raise HypothesisError("the round trip needs an exact ambient")
    if not in_M(ys):
        raise HypothesisError("tuple is not in M")
    stage = eps / (n + 1)
    thr = eta(n, stage)
    s = zero(ys.ambient)
    for a, y in zip(alphas, ys):
        s = s + a * y
    if not norm(s) > 1 - thr:
        raise HypothesisError(f"||sum alpha_i y_i|| = {norm(s)} is not above 1 - eta_n(eps/(n+1)) = {1 - thr}")
    T = ys / operator_norm(ys)
    x0 = recompose(alphas)
    bc = oracle(T, x0, stage)
    z = face_project(bc.S, bc.u0, x0, stage)
    beta = basis_decompose(z)
    A = tuple(i for i in range(1, n + 1) if beta[i - 1] != 0)
    cert = CorrectionCertificate(
        kind="roundtrip", eps=eps, inputs=ys, outputs=bc.S, attain=A, threshold=thr, alphas=alphas,
        moduli={"eta_stage": thr}, trace={"beta": list(beta), "u0_face": z, "oracle": bc},
    )
    return A, _checked_correction(cert, check)
