"""JSON codecs; every rational travels as a "p/q" string."""

from __future__ import annotations

from fractions import Fraction

from .linf import DomainVector
from .operators import OperatorTuple
from .sequence import Ambient, DualFunctional, L1, TargetVector, linf, oracle_ambient


def q(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def unq(s) -> Fraction:
    if isinstance(s, int) and not isinstance(s, bool):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rational must be a 'p/q' string, got {s!r}")
    return Fraction(s)


def ambient_to_json(a: Ambient):
    if a.kind == "l1":
        return "l1"
    if a.kind == "linf":
        return {"linf": a.m}
    return {"oracle": a.oracle}


def ambient_from_json(obj) -> Ambient:
    if obj == "l1":
        return L1
    if isinstance(obj, dict) and "linf" in obj:
        return linf(int(obj["linf"]))
    if isinstance(obj, dict) and "oracle" in obj:
        return oracle_ambient(obj["oracle"])
    raise ValueError(f"unknown ambient {obj!r}")


def vector_to_json(v: TargetVector) -> dict:
    return {"ambient": ambient_to_json(v.ambient), "entries": {str(k): q(x) for k, x in v.entries}}


def vector_from_json(obj) -> TargetVector:
    return TargetVector({int(k): unq(x) for k, x in obj["entries"].items()}, ambient_from_json(obj["ambient"]))


def domain_to_json(x: DomainVector) -> list[str]:
    return [q(c) for c in x]


def domain_from_json(obj) -> DomainVector:
    return DomainVector(unq(c) for c in obj)


def operator_to_json(op: OperatorTuple) -> dict:
    return {"n": op.n, "images": [vector_to_json(y) for y in op.images]}


def operator_from_json(obj) -> OperatorTuple:
    op = OperatorTuple(vector_from_json(y) for y in obj["images"])
    if "n" in obj and int(obj["n"]) != op.n:
        raise ValueError(f"declared n={obj['n']} but {op.n} images given")
    return op


def functional_to_json(f: DualFunctional) -> dict:
    if f.index is not None:
        return {"kind": "coordinate", "index": f.index}
    return {"kind": f.kind, "default": f.default, "exceptions": sorted(f.exceptions)}


def functional_from_json(obj) -> DualFunctional:
    if obj["kind"] == "coordinate":
        return DualFunctional(index=int(obj["index"]))
    return DualFunctional(int(obj.get("default", 1)), frozenset(int(k) for k in obj.get("exceptions", [])))


def rationals_to_json(xs) -> list[str]:
    return [q(x) for x in xs]


def rationals_from_json(obj) -> tuple[Fraction, ...]:
    return tuple(unq(x) for x in obj)
