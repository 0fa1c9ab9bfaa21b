"""Operators l_inf^n -> Y stored as the tuple of images of the basis v_i^n."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .linf import (
    DomainVector,
    IndexTuple,
    as_rational,
    basis_decompose,
    basis_vector,
    enumerate_odd_tuples,
    is_index_tuple,
    standard_vector,
)
from .sequence import Ambient, Approx, DualFunctional, L1, TargetVector, flip, norm, zero

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class OperatorTuple:
    """(y_1, ..., y_n) with y_i = T(v_i^n)."""

    images: tuple[TargetVector, ...]

    def __init__(self, images: Iterable[TargetVector]):
        images = tuple(images)
        if not images:
            raise ValueError("an operator tuple needs n >= 1 images")
        amb = images[0].ambient
        for y in images[1:]:
            if y.ambient != amb:
                raise ValueError(f"images mix ambients {amb} and {y.ambient}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def ambient(self) -> Ambient:
        return self.images[0].ambient

    def __getitem__(self, i):
        return self.images[i]

    def __iter__(self):
        return iter(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def _check(self, other: OperatorTuple) -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: OperatorTuple) -> OperatorTuple:
        self._check(other)
        return OperatorTuple(a + b for a, b in zip(self.images, other.images))

    def __sub__(self, other: OperatorTuple) -> OperatorTuple:
        self._check(other)
        return OperatorTuple(a - b for a, b in zip(self.images, other.images))

    def __neg__(self) -> OperatorTuple:
        return OperatorTuple(-a for a in self.images)

    def __mul__(self, c) -> OperatorTuple:
        c = as_rational(c)
        return OperatorTuple(c * a for a in self.images)

    __rmul__ = __mul__

    def __truediv__(self, c) -> OperatorTuple:
        return self * (1 / as_rational(c))

    def max_index(self) -> int:
        return max(y.max_index() for y in self.images)


def zero_operator(n: int, ambient: Ambient = L1) -> OperatorTuple:
    return OperatorTuple([zero(ambient)] * n)


def alternating_sum(op: OperatorTuple, t: IndexTuple) -> TargetVector:
    """y_{i_1} - y_{i_2} + y_{i_3} - ...; the empty tuple gives 0."""
    if not is_index_tuple(t, op.n):
        raise ValueError(f"{t} is not an increasing index tuple over 1..{op.n}")
    out = zero(op.ambient)
    for j, i in enumerate(t):
        out = out + op.images[i - 1] if j % 2 == 0 else out - op.images[i - 1]
    return out


@lru_cache(maxsize=None)
def _odd_coefficients(n: int) -> np.ndarray:
    rows = enumerate_odd_tuples(n)
    c = np.zeros((len(rows), n), dtype=np.int64)
    for r, t in enumerate(rows):
        for j, i in enumerate(t):
            c[r, i - 1] = 1 if j % 2 == 0 else -1
    return c


def dense_integer_matrix(vectors: Sequence[TargetVector]) -> tuple[np.ndarray, int]:
    """Rows of scaled integer entries over the union support, and the common denominator.

    Returns an int64 array when every entry fits comfortably, otherwise an
    object array of Python ints; either way the scaling is exact.
    """
    keys = sorted({k for v in vectors for k, _ in v.entries})
    col = {k: j for j, k in enumerate(keys)}
    den = 1
    for v in vectors:
        for _, x in v.entries:
            den = lcm(den, x.denominator)
    rows = [[0] * max(len(keys), 1) for _ in vectors]
    big = 0
    for r, v in enumerate(vectors):
        for k, x in v.entries:
            val = x.numerator * (den // x.denominator)
            rows[r][col[k]] = val
            big = max(big, abs(val))
    width = max(len(keys), 1)
    if big * len(vectors) * width < _INT64_SAFE:
        return np.array(rows, dtype=np.int64).reshape(len(vectors), width), den
    return np.array(rows, dtype=object).reshape(len(vectors), width), den


def _row_norms(sums: np.ndarray, kind: str) -> np.ndarray:
    a = np.abs(sums)
    return a.sum(axis=1) if kind == "l1" else a.max(axis=1)


def exact_max_norm(coeffs: np.ndarray, vectors: Sequence[TargetVector], kind: str) -> Fraction:
    """max over rows r of || sum_i coeffs[r, i] vectors[i] || for l1/linf, exactly."""
    mat, den = dense_integer_matrix(vectors)
    if mat.dtype == object:
        sums = coeffs.astype(object) @ mat
    else:
        sums = coeffs @ mat
    best = _row_norms(sums, kind).max()
    return Fraction(int(best), den)


def operator_norm(op: OperatorTuple):
    """max of ||alternating_sum(op, t)|| over the odd tuples t.

    Exact for l1 and l_inf^m ambients; an ``Approx`` for oracle ambients.
    """
    if op.ambient.exact:
        return exact_max_norm(_odd_coefficients(op.n), op.images, op.ambient.kind)
    return max(norm(alternating_sum(op, t)) for t in enumerate_odd_tuples(op.n))


def in_M(op: OperatorTuple) -> bool:
    """Whether the tuple is the image of an operator of norm at most one."""
    value = operator_norm(op)
    if isinstance(value, Approx):
        return value <= 1 + value.tol
    return value <= 1


def apply(op: OperatorTuple, x: DomainVector) -> TargetVector:
    if x.n != op.n:
        raise ValueError(f"dimension mismatch: operator on l_inf^{op.n}, vector of length {x.n}")
    out = zero(op.ambient)
    for a, y in zip(basis_decompose(x), op.images):
        if a:
            out = out + a * y
    return out


def from_standard_images(cols: Sequence[TargetVector]) -> OperatorTuple:
    """Convert T given by T(e_j) = cols[j] into its basis-image tuple."""
    cols = list(cols)
    n = len(cols)
    if n < 1:
        raise ValueError("need at least one column")
    images = []
    for i in range(1, n + 1):
        acc = zero(cols[0].ambient)
        for c, col in zip(basis_vector(i, n), cols):
            acc = acc + col if c == 1 else acc - col
        images.append(acc)
    return OperatorTuple(images)


def to_standard_images(op: OperatorTuple) -> list[TargetVector]:
    return [apply(op, standard_vector(j, op.n)) for j in range(1, op.n + 1)]


def compose_domain(op: OperatorTuple, g) -> OperatorTuple:
    """Basis images of x -> op(g(x)) for a linear map g on l_inf^n."""
    return OperatorTuple(apply(op, g(basis_vector(i, op.n))) for i in range(1, op.n + 1))


def tau(op: OperatorTuple) -> OperatorTuple:
    """(y_1, ..., y_n) -> (y_2, ..., y_n, -y_1)."""
    return OperatorTuple(op.images[1:] + (-op.images[0],))


def tau_inverse(op: OperatorTuple) -> OperatorTuple:
    return OperatorTuple((-op.images[-1],) + op.images[:-1])


def tau_power(op: OperatorTuple, k: int) -> OperatorTuple:
    k %= 2 * op.n
    for _ in range(k):
        op = tau(op)
    return op


def flip_operator(op: OperatorTuple, f: DualFunctional) -> OperatorTuple:
    return OperatorTuple(flip(y, f) for y in op.images)


def distance(S: OperatorTuple, T: OperatorTuple):
    """Operator norm of S - T."""
    return operator_norm(S - T)
