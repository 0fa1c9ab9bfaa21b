"""Target spaces: finitely supported exact vectors with l1 or l_inf^m norms.

Generic finite-dimensional targets enter through a named norm oracle; their
norms are floats tagged with the oracle's tolerance (see ``Approx``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .linf import as_rational


class Approx(float):
    """A float norm value carrying the absolute tolerance of its oracle."""

    tol: float

    def __new__(cls, value: float, tol: float):
        obj = super().__new__(cls, value)
        obj.tol = tol
        return obj

    def __repr__(self) -> str:
        return f"Approx({float(self)!r}, tol={self.tol!r})"


@dataclass(frozen=True)
class NormOracle:
    name: str
    fn: Callable[[dict[int, float]], float] = field(compare=False)
    tol: float = 1e-9


_ORACLES: dict[str, NormOracle] = {}


def register_oracle(name: str, fn: Callable[[dict[int, float]], float], tol: float = 1e-9) -> NormOracle:
    oracle = NormOracle(name, fn, tol)
    _ORACLES[name] = oracle
    return oracle


def get_oracle(name: str) -> NormOracle:
    try:
        return _ORACLES[name]
    except KeyError:
        raise KeyError(f"no norm oracle registered under {name!r}") from None


register_oracle("l2", lambda e: math.sqrt(sum(x * x for x in e.values())), 1e-9)


@dataclass(frozen=True)
class Ambient:
    """Norm tag of a target vector: ``l1``, ``linf`` (with dimension m) or ``oracle``."""

    kind: str
    m: int | None = None
    oracle: str | None = None

    def __post_init__(self):
        if self.kind not in ("l1", "linf", "oracle"):
            raise ValueError(f"unknown ambient kind {self.kind!r}")
        if self.kind == "linf" and (self.m is None or self.m < 1):
            raise ValueError("linf ambient needs a dimension m >= 1")
        if self.kind == "oracle":
            get_oracle(self.oracle)

    @property
    def exact(self) -> bool:
        return self.kind != "oracle"

    def __str__(self) -> str:
        if self.kind == "linf":
            return f"linf^{self.m}"
        if self.kind == "oracle":
            return f"oracle:{self.oracle}"
        return "l1"


L1 = Ambient("l1")


def linf(m: int) -> Ambient:
    return Ambient("linf", m)


def oracle_ambient(name: str) -> Ambient:
    return Ambient("oracle", oracle=name)


class AmbientError(ValueError):
    pass


@dataclass(frozen=True)
class TargetVector:
    """Sparse vector k -> value (k >= 1), zero entries never stored."""

    entries: tuple[tuple[int, Fraction], ...]
    ambient: Ambient = L1

    def __init__(self, entries: Mapping | Iterable = (), ambient: Ambient = L1):
        if isinstance(entries, Mapping):
            items = entries.items()
        else:
            items = enumerate(entries, start=1)
        clean: dict[int, Fraction] = {}
        for k, v in items:
            k = int(k)
            if k < 1:
                raise ValueError(f"indices start at 1, got {k}")
            v = as_rational(v)
            if v:
                clean[k] = v
        if ambient.kind == "linf" and clean and max(clean) > ambient.m:
            raise ValueError(f"index {max(clean)} exceeds linf dimension {ambient.m}")
        object.__setattr__(self, "entries", tuple(sorted(clean.items())))
        object.__setattr__(self, "ambient", ambient)

    @classmethod
    def _raw(cls, entries: dict[int, Fraction], ambient: Ambient) -> TargetVector:
        # trusted constructor: keys >= 1, values nonzero Fractions
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", tuple(sorted(entries.items())))
        object.__setattr__(obj, "ambient", ambient)
        return obj

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.entries)

    def get(self, k: int) -> Fraction:
        for j, v in self.entries:
            if j == k:
                return v
        return Fraction(0)

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def dense(self, m: int) -> list[Fraction]:
        d = self.as_dict()
        return [d.get(k, Fraction(0)) for k in range(1, m + 1)]

    def _same(self, other: TargetVector) -> None:
        if self.ambient != other.ambient:
            raise AmbientError(f"ambient mismatch: {self.ambient} vs {other.ambient}")

    def __add__(self, other: TargetVector) -> TargetVector:
        self._same(other)
        d = self.as_dict()
        for k, v in other.entries:
            s = d.get(k, 0) + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return TargetVector._raw(d, self.ambient)

    def __neg__(self) -> TargetVector:
        return TargetVector._raw({k: -v for k, v in self.entries}, self.ambient)

    def __sub__(self, other: TargetVector) -> TargetVector:
        return self + (-other)

    def __mul__(self, c) -> TargetVector:
        c = as_rational(c)
        if not c:
            return TargetVector._raw({}, self.ambient)
        return TargetVector._raw({k: c * v for k, v in self.entries}, self.ambient)

    __rmul__ = __mul__

    def __truediv__(self, c) -> TargetVector:
        return self * (1 / as_rational(c))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def is_nonnegative(self) -> bool:
        return all(v > 0 for _, v in self.entries)

    def dominates(self, other: TargetVector) -> bool:
        """Entrywise self >= other (absent entries are 0)."""
        return (self - other).is_nonnegative()

    def norm(self):
        return norm(self)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.entries)
        tag = "" if self.ambient == L1 else f", {self.ambient}"
        return f"TargetVector({{{body}}}{tag})"


def zero(ambient: Ambient = L1) -> TargetVector:
    return TargetVector._raw({}, ambient)


def unit(k: int = 1, ambient: Ambient = L1) -> TargetVector:
    return TargetVector({k: 1}, ambient)


def norm(v: TargetVector):
    """Exact norm for l1/l_inf^m; an ``Approx`` float for oracle ambients."""
    kind = v.ambient.kind
    if kind == "l1":
        return sum((abs(x) for _, x in v.entries), Fraction(0))
    if kind == "linf":
        return max((abs(x) for _, x in v.entries), default=Fraction(0))
    oracle = get_oracle(v.ambient.oracle)
    return Approx(oracle.fn({k: float(x) for k, x in v.entries}), oracle.tol)


def _require_l1(v: TargetVector, what: str) -> None:
    if v.ambient.kind != "l1":
        raise AmbientError(f"{what} is defined on l1 only, got {v.ambient}")


def u_star(v: TargetVector) -> Fraction:
    """The summing functional: sum of all entries."""
    _require_l1(v, "u*")
    return sum((x for _, x in v.entries), Fraction(0))


def positive_part(v: TargetVector) -> TargetVector:
    _require_l1(v, "positive_part")
    return TargetVector._raw({k: x for k, x in v.entries if x > 0}, v.ambient)


def coordinate_max(vs: list[TargetVector]) -> TargetVector:
    """Entrywise maximum, absent entries counting as 0."""
    if not vs:
        raise ValueError("coordinate_max of an empty list")
    amb = vs[0].ambient
    for v in vs[1:]:
        vs[0]._same(v)
    dicts = [v.as_dict() for v in vs]
    keys = set().union(*dicts)
    out = {}
    for k in keys:
        m = max(d.get(k, Fraction(0)) for d in dicts)
        if m:
            out[k] = m
    return TargetVector._raw(out, amb)


def truncate(v: TargetVector, m: int) -> TargetVector:
    return TargetVector._raw({k: x for k, x in v.entries if k <= m}, v.ambient)


@dataclass(frozen=True)
class DualFunctional:
    """A norm-one functional on l1.

    Sign-vector functionals carry the sign ``default`` on every index except
    those in ``exceptions``, which get ``-default``.  The summing functional
    u* is the sign vector with default +1 and no exceptions.  A coordinate
    functional evaluates a single entry.
    """

    default: int = 1
    exceptions: frozenset[int] = frozenset()
    index: int | None = None

    def __post_init__(self):
        if self.default not in (1, -1):
            raise ValueError("default sign must be +1 or -1")
        object.__setattr__(self, "exceptions", frozenset(self.exceptions))

    @property
    def kind(self) -> str:
        if self.index is not None:
            return "coordinate"
        if self.default == 1 and not self.exceptions:
            return "summing"
        return "sign-vector"

    def sign(self, k: int) -> int:
        if self.index is not None:
            return 1 if k == self.index else 0
        return -self.default if k in self.exceptions else self.default

    def __call__(self, v: TargetVector) -> Fraction:
        _require_l1(v, "a dual functional")
        if self.index is not None:
            return v.get(self.index)
        return sum((self.sign(k) * x for k, x in v.entries), Fraction(0))

    def compose(self, other: DualFunctional) -> DualFunctional:
        """Pointwise product of two sign vectors."""
        if self.index is not None or other.index is not None:
            raise ValueError("only sign-vector functionals compose")
        return DualFunctional(self.default * other.default, self.exceptions ^ other.exceptions)

    def restrict(self, m: int) -> DualFunctional:
        """The same functional seen on l1^m (indices beyond m dropped)."""
        if self.index is not None:
            return self
        return DualFunctional(self.default, frozenset(k for k in self.exceptions if k <= m))


U_STAR = DualFunctional()


def coordinate_functional(k: int) -> DualFunctional:
    return DualFunctional(index=k)


def sign_functional(v: TargetVector, zero_sign: int = 1) -> DualFunctional:
    """Norming sign functional of v: f(v) = ||v||_1, sign ``zero_sign`` where v vanishes."""
    _require_l1(v, "sign_functional")
    if zero_sign == 1:
        return DualFunctional(1, frozenset(k for k, x in v.entries if x < 0))
    if zero_sign == -1:
        return DualFunctional(-1, frozenset(k for k, x in v.entries if x > 0))
    raise ValueError("zero_sign must be +1 or -1")


def flip(v: TargetVector, f: DualFunctional) -> TargetVector:
    """The l1 isometry x(k) -> sign_f(k) x(k); it is its own inverse and maps f to u*."""
    _require_l1(v, "flip")
    if f.index is not None:
        raise ValueError("flip needs a sign-vector functional")
    return TargetVector._raw({k: f.sign(k) * x for k, x in v.entries}, v.ambient)
