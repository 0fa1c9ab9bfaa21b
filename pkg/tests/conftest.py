from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bpbp.linf import DomainVector
from bpbp.operators import OperatorTuple
from bpbp.sequence import TargetVector

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(lo=-1, hi=1, max_den=12):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=max_den)


def domain_vectors(n, lo=-1, hi=1):
    return st.lists(rationals(lo, hi), min_size=n, max_size=n).map(DomainVector)


@st.composite
def target_vectors(draw, max_m=6, lo=-1, hi=1):
    m = draw(st.integers(1, max_m))
    return TargetVector(draw(st.lists(rationals(lo, hi), min_size=m, max_size=m)))


@st.composite
def operator_tuples(draw, n=None, max_n=5, m=None, max_m=5):
    n = n or draw(st.integers(1, max_n))
    m = m or draw(st.integers(1, max_m))
    row = st.lists(rationals(), min_size=m, max_size=m).map(TargetVector)
    return OperatorTuple(draw(st.lists(row, min_size=n, max_size=n)))


def tv(*xs):
    return TargetVector([Fraction(x) for x in xs])


def F(s):
    return Fraction(s)


# --- acceptance summary ----------------------------------------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE[number] = (ok, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
