from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpbp.ahsp import auxiliar_w, correct_convex, correct_for_functional, correct_positive, truncation_lift
from bpbp.certificates import all_ok, verify
from bpbp.errors import HypothesisError
from bpbp.generators import gen_ahsp, gen_auxiliar, gen_convex, gen_functional, instance_rng
from bpbp.harness import auxiliar_clauses
from bpbp.moduli import gamma_prime, truncation_gamma
from bpbp.operators import OperatorTuple, flip_operator, in_M
from bpbp.sequence import DualFunctional, TargetVector, U_STAR, norm, u_star, unit, zero

from conftest import tv

F = Fraction
OP = OperatorTuple
EPS = st.sampled_from([F(1, 2), F(1, 4), F(1, 8), F(9, 10)])


def attained(zs, A):
    s = zero()
    for i in A:
        s = s + zs[i - 1]
    return norm(s)


# --- auxiliar_w -------------------------------------------------------

def test_auxiliar_example():
    y, x = tv(F(-1, 5), F(1, 2)), tv(F(1, 10), F(-2, 5))
    w = auxiliar_w([x], y, 1, 0)
    assert w == tv(F(-1, 10), F(1, 2))
    assert norm(w - y) == F(1, 10)


def test_auxiliar_fixed_points():
    y = tv(F(1, 2), F(1, 4))
    assert auxiliar_w([zero()], y, F(1, 2), 0) == y
    xs = [tv(F(1, 4)), tv(0, F(1, 4))]
    assert auxiliar_w(xs, y, F(1, 2), F(1, 2)) == y


def test_auxiliar_preconditions():
    with pytest.raises(HypothesisError):
        auxiliar_w([tv(-1)], zero(), F(1, 2), 0)
    with pytest.raises(ValueError):
        auxiliar_w([], zero(), 0, 0)


@given(st.integers(0, 10**6), st.integers(1, 5), st.integers(1, 6))
def test_auxiliar_contract(seed, count, m):
    d = gen_auxiliar(instance_rng(seed, "aux"), count, m)
    flags = auxiliar_clauses(d["xs"], d["y"], d["r"], d["s"])
    assert all(flags.values()), flags


# --- correct_positive -------------------------------------------------

def test_positive_base_case():
    c = correct_positive(OP([tv(F(3, 5), F(3, 10), F(-1, 20))]), 1, F(2, 5))
    assert c.outputs == OP([tv(F(7, 10), F(3, 10))])
    assert norm(c.outputs[0] - c.inputs[0]) == F(3, 20)


def test_positive_fixed_point():
    ys = OP([unit(1), unit(1)])
    assert correct_positive(ys, 2, F(1, 2)).outputs == ys
    ys = OP([unit(1)] * 4)
    assert correct_positive(ys, 4, F(1, 8)).outputs == ys


def test_positive_two_units():
    c = correct_positive(OP([unit(1), unit(2)]), 2, F(1, 2))
    t = F(1, 16) / (1 + F(1, 16))
    assert c.outputs == OP([unit(1), tv(t, 1 - t)])
    assert all_ok(verify(c))


def test_positive_hypothesis_gap():
    with pytest.raises(HypothesisError):
        correct_positive(OP([tv(F(1, 2))]), 1, F(1, 2))
    with pytest.raises(HypothesisError):
        correct_positive(OP([tv(2)]), 1, F(1, 2))
    with pytest.raises(ValueError):
        correct_positive(OP([unit(1)]), 2, F(1, 2))


@settings(max_examples=60)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 6), EPS)
def test_positive_postconditions(seed, n, m, eps):
    d = gen_ahsp(instance_rng(seed, "pos"), n, m, eps)
    c = correct_positive(d["ys"], d["n0"], eps)
    assert in_M(c.outputs)
    assert all(norm(z - y) < eps for z, y in zip(c.outputs, d["ys"]))
    for i in range(1, d["n0"] + 1):
        assert c.outputs[i - 1].is_nonnegative() and u_star(c.outputs[i - 1]) == 1


# --- correct_for_functional -------------------------------------------

def test_functional_single_index():
    ys = OP([tv(F(1, 2), F(1, 2)), tv(F(1, 3))])
    c = correct_for_functional(ys, [1], U_STAR, F(1, 2))
    assert attained(c.outputs, [1]) == 1


def test_functional_all_negative_mirrors_u_star():
    ys = OP([tv(F(1, 2), F(1, 2)), tv(F(1, 4), F(3, 4))])
    neg = DualFunctional(-1)
    a = correct_for_functional(ys, [1, 2], U_STAR, F(1, 4))
    b = correct_for_functional(-ys, [1, 2], neg, F(1, 4))
    assert b.outputs == -a.outputs


def test_functional_constant_tuple():
    p = tv(F(1, 3), F(2, 3))
    for n in (1, 2, 3):
        c = correct_for_functional(OP([p] * n), range(1, n + 1), U_STAR, F(1, 2))
        assert attained(c.outputs, range(1, n + 1)) == n


def test_functional_rejects_coordinate_functional():
    from bpbp.sequence import coordinate_functional
    with pytest.raises(ValueError):
        correct_for_functional(OP([unit(1)]), [1], coordinate_functional(1), F(1, 2))


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 6), EPS)
def test_functional_postconditions(seed, n, m, eps):
    d = gen_functional(instance_rng(seed, "fun"), n, m, eps)
    c = correct_for_functional(d["ys"], d["A"], d["f"], eps)
    assert in_M(c.outputs)
    assert attained(c.outputs, d["A"]) == len(d["A"])
    assert all(norm(z - y) < eps for z, y in zip(c.outputs, d["ys"]))


@settings(max_examples=30)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 5), st.integers(0, 2**5 - 1), st.sampled_from((1, -1)))
def test_sign_conjugation_equivariance(seed, n, m, mask, default):
    eps = F(1, 4)
    d = gen_functional(instance_rng(seed, "eqv"), n, m, eps)
    g = DualFunctional(default, frozenset(k for k in range(1, m + 1) if mask >> (k - 1) & 1))
    base = correct_for_functional(d["ys"], d["A"], d["f"], eps)
    moved = correct_for_functional(flip_operator(d["ys"], g), d["A"], d["f"].compose(g), eps)
    assert moved.outputs == flip_operator(base.outputs, g)


# --- correct_convex ---------------------------------------------------

def test_convex_point_mass():
    ys = OP([tv(F(1, 2), F(1, 2)), tv(F(-1, 4), F(1, 4))])
    C, c = correct_convex(ys, [1, 0], F(1, 2))
    assert 1 in C and all_ok(verify(c))


def test_convex_constant_attaining():
    p = tv(F(1, 5), F(4, 5))
    C, _ = correct_convex(OP([p] * 3), [F(1, 3)] * 3, F(1, 2))
    assert C == (1, 2, 3)
    C, _ = correct_convex(OP([-p] * 3), [F(1, 2), F(1, 2), 0], F(1, 2))
    assert C == (1, 2, 3)


def test_convex_hypothesis_gap():
    with pytest.raises(HypothesisError):
        correct_convex(OP([unit(1), -unit(1)]), [F(1, 2), F(1, 2)], F(1, 2))
    with pytest.raises(ValueError):
        correct_convex(OP([unit(1)]), [F(1, 2)], F(1, 2))


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 6), EPS)
def test_convex_postconditions(seed, n, m, eps):
    d = gen_convex(instance_rng(seed, "cvx"), n, m, eps)
    C, c = correct_convex(d["ys"], d["alphas"], eps)
    assert sum(d["alphas"][i - 1] for i in C) > 1 - eps
    assert attained(c.outputs, C) == len(C)
    assert in_M(c.outputs)


# --- truncation_lift --------------------------------------------------

def test_truncation_matches_direct_correction():
    ys = OP([tv(F(1, 3), F(2, 3)), tv(F(1, 2), F(1, 2))])
    eps = F(1, 2)
    c = truncation_lift(ys, [1, 2], U_STAR, eps)
    t, n = c.trace["t"], 2
    direct = correct_for_functional(ys / (1 + n * t), [1, 2], U_STAR, eps / 2)
    assert c.outputs == direct.outputs
    assert attained(c.outputs, [1, 2]) == 2


def test_truncation_single_image():
    c = truncation_lift(OP([tv(F(1, 2), F(1, 2))]), [1], U_STAR, F(1, 3))
    assert c.outputs[0].is_nonnegative() and u_star(c.outputs[0]) == 1


def test_truncation_bound_positive_and_checked():
    ys = OP([tv(F(1, 2), F(1, 2), F(1, 10**6))])
    ys = ys / norm(ys[0])
    eps = F(1, 2)
    assert ys[0].max_index() == 3
    c = truncation_lift(ys, [1], U_STAR, eps)
    assert c.trace["t"] > 0
    with pytest.raises(HypothesisError):
        truncation_lift(ys, [1], U_STAR, eps, m=1)
    g = truncation_gamma(1, eps)
    assert g == gamma_prime(1, eps / 2)


# --- certificates -----------------------------------------------------

def test_tampered_output_fails_named_clause():
    c = correct_positive(OP([tv(F(3, 5), F(3, 10), F(-1, 20))]), 1, F(2, 5))
    c.outputs = OP([tv(F(7, 10), F(3, 10), F(-1, 100))])
    names = {cl.name for cl in verify(c) if not cl.ok}
    assert "positivity" in names and "evidence" in names
