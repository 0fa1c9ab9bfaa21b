from fractions import Fraction

import pytest
from hypothesis import given

from bpbp.moduli import eta, gamma, gamma_prime, inner_epsilon, modulus_chain, nu, rho, truncation_gamma

from conftest import rationals

eps_values = rationals(0, 1, 50).filter(lambda e: 0 < e < 1)


@pytest.mark.parametrize("e", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(2, 3)])
def test_spot_values(e):
    assert rho(1, e) == e / 2
    assert rho(2, e) == e / 48
    assert rho(3, e) == e / 3072
    assert gamma(1, e) == e**2 / 16
    assert gamma(2, e) == e**2 / 36864
    assert gamma_prime(2, e) == e / 96


def test_domain():
    for bad in (0, 1, Fraction(3, 2), -1):
        with pytest.raises(ValueError):
            rho(2, bad)
    with pytest.raises(ValueError):
        rho(0, Fraction(1, 2))
    with pytest.raises(TypeError):
        rho(1, 0.5)


def test_inner_epsilon_counts_empty_tuple():
    assert inner_epsilon(1, Fraction(1, 2)) == Fraction(1, 2) / 24
    assert inner_epsilon(2, Fraction(1, 2)) == Fraction(1, 2) / 64


@given(eps_values, eps_values)
def test_rho_monotone(a, b):
    for n in range(1, 5):
        if a < b:
            assert rho(n, a) < rho(n, b)
        assert rho(n + 1, a) < rho(n, a)


@given(eps_values)
def test_chain_contracts(e):
    for n in range(1, 5):
        c = modulus_chain(n, e)
        assert 0 < c.eta < c.nu <= c.gamma < c.gamma_prime < c.rho < e
        assert eta(n, e) == nu(n, e / (n + 1))
        assert truncation_gamma(n, e) == gamma_prime(n, e / 2)
