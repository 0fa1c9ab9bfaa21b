from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpbp.bpbp import DomainIsometry, ahsp_from_bpbp, bpbp_correct, face_project, normalize_to_O
from bpbp.certificates import all_ok, verify, verify_bpb
from bpbp.errors import HypothesisError
from bpbp.generators import gen_bpbp, gen_convex, instance_rng, random_isometry
from bpbp.linf import DomainVector, basis_decompose, in_convex_hull_B, in_O
from bpbp.moduli import eta
from bpbp.operators import OperatorTuple, apply, distance, operator_norm
from bpbp.sequence import norm, unit

from conftest import domain_vectors, tv

F = Fraction
D = DomainVector
OP = OperatorTuple


def test_face_project_example():
    op = OP([tv(1)] * 3)  # x -> x(1), norm one and attained at every x with x(1) = 1
    x, y = D([1, -1, 0]), D([1, F(-9, 10), F(3, 10)])
    assert face_project(op, y, x, F(2, 5)) == x
    assert face_project(op, x, x, F(2, 5)) == x


def test_face_project_pins_minus_ones():
    op = OP([tv(1)] * 4)
    x = D([1, F(-4, 5), F(-4, 5), F(1, 2)])
    y = D([1, -1, -1, F(1, 2)])
    z = face_project(op, y, x, F(1, 4))
    assert z[1] == z[2] == -1 and in_convex_hull_B(z)


def test_face_project_requires_attainment():
    with pytest.raises(HypothesisError):
        face_project(OP([tv(F(1, 2))] * 2), D([1, 1]), D([1, 1]), F(1, 2))


def test_normalize_examples():
    J, v = normalize_to_O(D([1, -1, 0]))
    assert J == DomainIsometry.identity(3) and v == D([1, -1, 0])
    J, v = normalize_to_O(D([-1, 0, 1]))
    assert in_O(v) and J(D([-1, 0, 1])) == v
    J, v = normalize_to_O(D([0, 1]))
    assert v == D([1, 0]) and J.perm == (2, 1)
    with pytest.raises(ValueError):
        normalize_to_O(D([F(1, 2), 0]))


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(domain_vectors(n), domain_vectors(n), st.integers(0, 10**6))))
def test_isometries_are_exact(data):
    x, y, seed = data
    J = random_isometry(instance_rng(seed, "iso"), x.n)
    assert (J(x) - J(y)).norm() == (x - y).norm()
    assert J.inverse()(J(x)) == x and J.then(J.inverse()) == DomainIsometry.identity(x.n)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(domain_vectors(n), st.integers(1, n))))
def test_normalize_lands_in_O(data):
    x, k = data
    x = D(list(x.coords[: k - 1]) + [F(-1)] + list(x.coords[k:]))
    J, v = normalize_to_O(x)
    assert in_O(v) and J(x) == v


def test_bpbp_attaining_example():
    T = OP([unit(1), unit(2)])
    x0 = D([1, 1])
    c = bpbp_correct(T, x0, F(1, 2))
    assert c.u0 == x0
    assert norm(apply(c.S, c.u0)) == 1 and operator_norm(c.S) == 1
    assert c.S[0] == T[0] and c.S[1] == tv(F(1, 49), F(48, 49))


def test_bpbp_attaining_positive_images():
    T = OP([tv(F(1, 4), F(3, 4))] * 3)
    x0 = D([1, -1, 1])
    c = bpbp_correct(T, x0, F(1, 4))
    assert distance(c.S, c.T) < F(1, 4) and all_ok(verify_bpb(c))


def test_bpbp_hypothesis_gap():
    with pytest.raises(HypothesisError):
        bpbp_correct(OP([unit(1), unit(1)]), D([0, 1]), F(1, 2))
    with pytest.raises(HypothesisError):
        bpbp_correct(OP([tv(2)]), D([1]), F(1, 2))


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 6), st.sampled_from([F(1, 2), F(1, 8)]))
def test_bpbp_postconditions(seed, n, m, eps):
    d = gen_bpbp(instance_rng(seed, "bp"), n, m, eps)
    c = bpbp_correct(d["T"], d["x0"], eps)
    assert operator_norm(c.S) == 1 == norm(apply(c.S, c.u0))
    assert (c.u0 - c.x0).norm() < eps and distance(c.S, c.T) < eps


def test_roundtrip_attaining_example():
    ys = OP([unit(1), unit(2)])
    A, c = ahsp_from_bpbp(bpbp_correct, ys, [1, 0], F(1, 2))
    assert 1 in A and all_ok(verify(c))


def test_roundtrip_concentrated_weight():
    ys = OP([tv(F(1, 2), F(-1, 2)), tv(F(1, 3), F(2, 3))])
    A, _ = ahsp_from_bpbp(bpbp_correct, ys, [0, 1], F(1, 2))
    assert 2 in A


def test_roundtrip_eps_near_one():
    ys = OP([tv(F(1, 2), F(1, 2)), tv(F(1, 2), F(1, 2))])
    A, c = ahsp_from_bpbp(bpbp_correct, ys, [F(1, 2), F(1, 2)], F(99, 100))
    assert all_ok(verify(c))


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 5), st.sampled_from([F(1, 2), F(1, 4)]))
def test_roundtrip_postconditions(seed, n, m, eps):
    d = gen_convex(instance_rng(seed, "rt"), n, m, eps, eta(n, eps / (n + 1)))
    C, c = ahsp_from_bpbp(bpbp_correct, d["ys"], d["alphas"], eps)
    clauses = verify(c)
    assert all_ok(clauses), [cl.line() for cl in clauses if not cl.ok]
    beta = c.trace["beta"]
    assert set(C) == {i for i, b in enumerate(beta, 1) if b}
    assert basis_decompose(c.trace["u0_face"]) == tuple(beta)
