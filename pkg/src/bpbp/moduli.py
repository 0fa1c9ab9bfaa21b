"""Modulus functions of the l1 correction chain, as exact rationals.

rho      -- threshold on u*(y_i) for ``correct_positive``
gamma_prime -- rho/2, threshold for sign functionals (``correct_for_functional``)
gamma    -- rho(eps/n)^2 / 4, threshold for an arbitrary norm-one functional
nu       -- gamma^2, threshold on ||sum alpha_i y_i|| (``correct_convex``)
eta      -- gamma(eps/(n+1))^2, threshold on ||T(x0)|| (``bpbp_correct``)
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .linf import as_rational


def _eps(eps) -> Fraction:
    eps = as_rational(eps)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def _dim(n: int) -> int:
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    return n


def even_tuple_count(n: int) -> int:
    """|P_n| with the empty tuple counted."""
    return 2 ** (n - 1)


def inner_epsilon(n: int, eps) -> Fraction:
    """Accuracy at which the first n images are corrected when correcting n + 1 of them."""
    return _eps(eps) / (8 * (n + 2) * even_tuple_count(n))


def rho(n: int, eps) -> Fraction:
    e = _eps(eps)
    for k in range(_dim(n) - 1, 0, -1):
        e = inner_epsilon(k, e)
    return e / 2


def gamma_prime(n: int, eps) -> Fraction:
    return rho(n, eps) / 2


def gamma(n: int, eps) -> Fraction:
    return rho(n, _eps(eps) / _dim(n)) ** 2 / 4


def nu(n: int, eps) -> Fraction:
    return gamma(n, eps) ** 2


def eta(n: int, eps) -> Fraction:
    return nu(n, _eps(eps) / (n + 1))


def gamma_from_eta(n: int, eps, eta_fn=eta) -> Fraction:
    """AHSp modulus obtained from a BPBp modulus ``eta_fn``."""
    return eta_fn(n, _eps(eps) / (n * (n + 1)))


def truncation_gamma(n: int, eps) -> Fraction:
    """Threshold for the truncation lift: the sign-functional modulus at eps/2."""
    return gamma_prime(n, _eps(eps) / 2)


@dataclass(frozen=True)
class ModulusChain:
    n: int
    eps: Fraction
    rho: Fraction
    gamma_prime: Fraction
    gamma: Fraction
    nu: Fraction
    eta: Fraction

    def as_dict(self) -> dict:
        return asdict(self)


def modulus_chain(n: int, eps) -> ModulusChain:
    eps = _eps(eps)
    return ModulusChain(n, eps, rho(n, eps), gamma_prime(n, eps), gamma(n, eps), nu(n, eps), eta(n, eps))
