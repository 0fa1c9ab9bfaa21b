"""Geometry of the domain space l_inf^n.

Indices follow the mathematical convention: basis vectors, index tuples and
coordinates passed to ``basis_vector``/``enumerate_*`` are 1-based, while
``DomainVector.coords`` is an ordinary 0-based Python tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

IndexTuple = tuple[int, ...]
BasisCoefficients = tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Convert ``x`` to an exact Fraction; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


@dataclass(frozen=True)
class DomainVector:
    """A point of l_inf^n with exact rational coordinates."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        values = tuple(as_rational(c) for c in coords)
        if not values:
            raise ValueError("a domain vector needs at least one coordinate")
        object.__setattr__(self, "coords", values)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def norm(self) -> Fraction:
        return max(abs(c) for c in self.coords)

    def _check(self, other: DomainVector) -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: DomainVector) -> DomainVector:
        self._check(other)
        return DomainVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: DomainVector) -> DomainVector:
        self._check(other)
        return DomainVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> DomainVector:
        return DomainVector(-a for a in self.coords)

    def __mul__(self, c) -> DomainVector:
        c = as_rational(c)
        return DomainVector(c * a for a in self.coords)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "DomainVector(" + ", ".join(str(c) for c in self.coords) + ")"


def zero_vector(n: int) -> DomainVector:
    return DomainVector([0] * n)


def standard_vector(j: int, n: int) -> DomainVector:
    if not 1 <= j <= n:
        raise ValueError(f"index {j} out of range 1..{n}")
    return DomainVector([1 if k == j else 0 for k in range(1, n + 1)])


@lru_cache(maxsize=None)
def basis_vector(i: int, n: int) -> DomainVector:
    """The basis vector v_i^n: +1 at coordinate 1 and after i, -1 on 2..i."""
    if n < 1 or not 1 <= i <= n:
        raise ValueError(f"basis index {i} out of range 1..{n}")
    return DomainVector([-1 if 2 <= j <= i else 1 for j in range(1, n + 1)])


def basis(n: int) -> list[DomainVector]:
    return [basis_vector(i, n) for i in range(1, n + 1)]


def _tuples_of_parity(n: int, parity: int) -> list[IndexTuple]:
    if n < 1:
        raise ValueError("dimension must be positive")
    out: list[IndexTuple] = []
    for k in range(parity, n + 1, 2):
        out.extend(combinations(range(1, n + 1), k))
    return out


@lru_cache(maxsize=None)
def enumerate_odd_tuples(n: int) -> tuple[IndexTuple, ...]:
    """Strictly increasing odd-length tuples over 1..n, shortest first."""
    return tuple(_tuples_of_parity(n, 1))


@lru_cache(maxsize=None)
def enumerate_even_tuples(n: int) -> tuple[IndexTuple, ...]:
    """Strictly increasing even-length tuples over 1..n; includes ``()``."""
    return tuple(_tuples_of_parity(n, 0))


def is_index_tuple(t: Sequence[int], n: int) -> bool:
    return all(1 <= i <= n for i in t) and all(a < b for a, b in zip(t, t[1:]))


def basis_decompose(v: DomainVector) -> BasisCoefficients:
    """Coefficients alpha with v = sum_i alpha_i v_i^n."""
    n = v.n
    if n == 1:
        return (v[0],)
    two = Fraction(2)
    alphas = [(v[0] + v[1]) / two]
    alphas.extend((v[i] - v[i - 1]) / two for i in range(2, n))
    alphas.append((v[0] - v[n - 1]) / two)
    return tuple(alphas)


def recompose(alphas: Sequence) -> DomainVector:
    alphas = [as_rational(a) for a in alphas]
    n = len(alphas)
    coords = [Fraction(0)] * n
    for i, a in enumerate(alphas, start=1):
        if a:
            for j, c in enumerate(basis_vector(i, n)):
                coords[j] += a * c
    return DomainVector(coords)


def in_E1(v: DomainVector) -> bool:
    return v[0] == 1 and v.norm() == 1


def in_O(v: DomainVector) -> bool:
    """Membership in the monotone part of the face E_1^n."""
    if not in_E1(v):
        return False
    return all(v[i] <= v[i + 1] for i in range(1, v.n - 1))


def in_convex_hull_B(v: DomainVector) -> bool:
    alphas = basis_decompose(v)
    return all(a >= 0 for a in alphas) and sum(alphas) == 1


def alternating_combination(vectors: Sequence[DomainVector], t: IndexTuple, n: int) -> DomainVector:
    out = zero_vector(n)
    for j, i in enumerate(t):
        out = out + vectors[i - 1] if j % 2 == 0 else out - vectors[i - 1]
    return out


@lru_cache(maxsize=None)
def extreme_points_E1(n: int) -> tuple[DomainVector, ...]:
    """Extreme points of E_1^n as alternating sums of basis vectors over odd tuples."""
    vs = basis(n)
    return tuple(alternating_combination(vs, t, n) for t in enumerate_odd_tuples(n))


def sign_vectors_E1(n: int) -> list[DomainVector]:
    """Direct enumeration of {v : v(1) = 1, |v(i)| = 1}; used as an oracle."""
    out = []
    for mask in range(2 ** (n - 1)):
        out.append(DomainVector([1] + [-1 if mask >> k & 1 else 1 for k in range(n - 1)]))
    return out


def coefficient_gaps(x: DomainVector, y: DomainVector) -> list[tuple[int, Fraction, Fraction]]:
    """Per-index (i, |alpha_i - beta_i|, bound) for two points of co(B_n).

    The bound is ||x - y||/2 at the two end indices and ||x - y|| in between.
    For n = 1 both points equal (1,), so the single gap is 0.
    """
    d = (x - y).norm()
    a, b = basis_decompose(x), basis_decompose(y)
    n = x.n
    out = []
    for i in range(1, n + 1):
        bound = d if 1 < i < n else d / 2
        out.append((i, abs(a[i - 1] - b[i - 1]), bound))
    return out
