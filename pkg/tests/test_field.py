import cmath
import itertools
import math

import numpy as np
import pytest
from conftest import PRIMES, primes
from hypothesis import given
from hypothesis import strategies as st

from tensorrank.field import (
    AdditiveCharacter,
    FieldElement,
    check_modulus,
    find_nonsquare,
    form_gauss_sum,
    gauss_sum,
    half,
    inv,
    is_odd_prime,
    legendre,
    legendre_table,
    quadratic_sum,
    sqrt_mod,
)


def squares(q):
    return {x * x % q for x in range(1, q)}


@pytest.mark.parametrize("q", PRIMES)
def test_legendre_matches_enumerated_squares(q):
    sq = squares(q)
    for a in range(1, q):
        assert legendre(a, q) == (1 if a in sq else -1)
    t = legendre_table(q)
    assert t[0] == 0
    assert all(t[a] == legendre(a, q) for a in range(1, q))


@pytest.mark.parametrize("a,q,want", [(1, 5, 1), (2, 5, -1), (4, 13, 1)])
def test_legendre_examples(a, q, want):
    assert legendre(a, q) == want
    assert legendre(FieldElement(a, q)) == want


def test_legendre_zero_is_rejected():
    with pytest.raises(ValueError):
        legendre(0, 7)
    with pytest.raises(TypeError):
        legendre(3)


@given(primes, st.integers(1, 10**6), st.integers(1, 10**6))
def test_legendre_multiplicative(q, a, b):
    if a % q and b % q:
        assert legendre(a * b, q) == legendre(a, q) * legendre(b, q)


@pytest.mark.parametrize("q,eps", [(3, 2), (5, 2), (7, 3), (17, 3), (41, 3), (71, 7)])
def test_find_nonsquare(q, eps):
    assert find_nonsquare(q) == eps
    assert find_nonsquare(q) == find_nonsquare(q)
    assert min(set(range(1, q)) - squares(q)) == eps


def test_modulus_validation():
    assert [q for q in range(120) if is_odd_prime(q)][:5] == [3, 5, 7, 11, 13]
    for bad in (2, 4, 9, 1, 0, -3, 103, 7.0):
        with pytest.raises(ValueError):
            check_modulus(bad)
    assert check_modulus(101) == 101


@given(primes, st.integers(-50, 50), st.integers(-50, 50))
def test_field_element_arithmetic(q, x, y):
    a, b = FieldElement(x, q), FieldElement(y, q)
    assert 0 <= a.value < q
    assert int(a + b) == (x + y) % q
    assert int(a - b) == (x - y) % q
    assert int(a * b) == (x * y) % q
    assert int(-a) == (-x) % q
    assert int(y - a) == (y - x) % q
    if y % q:
        assert int((a / b) * b) == a.value
        assert int(b * b.inverse()) == 1


def test_field_element_mixed_moduli():
    with pytest.raises(ValueError):
        FieldElement(1, 5) + FieldElement(1, 7)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, 5).inverse()


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_half_and_inverse(q):
    assert 2 * half(q) % q == 1
    assert all(a * inv(a, q) % q == 1 for a in range(1, q))


@pytest.mark.parametrize("q", [3, 7, 13])
def test_sqrt_mod(q):
    for a in squares(q):
        assert sqrt_mod(a, q) ** 2 % q == a
    with pytest.raises(ValueError):
        sqrt_mod(find_nonsquare(q), q)


@given(primes, st.integers(1, 100), st.integers(0, 200), st.integers(0, 200))
def test_additive_character_is_a_character(q, a, z, w):
    if a % q == 0:
        return
    psi = AdditiveCharacter(q, a)
    assert abs(abs(psi(z)) - 1) < 1e-12
    assert abs(psi(z + w) - psi(z) * psi(w)) < 1e-12
    assert abs(psi(z) - cmath.exp(2j * math.pi * (a * z % q) / q)) < 1e-12


@pytest.mark.parametrize("q", PRIMES)
def test_character_sum_vanishes(q):
    assert abs(AdditiveCharacter(q, 1)(np.arange(q)).sum()) < 1e-12 * q


def test_trivial_character_rejected():
    with pytest.raises(ValueError):
        AdditiveCharacter(5, 10)


def test_gauss_sum_q3():
    assert abs(gauss_sum(AdditiveCharacter(3)) - (-1j * math.sqrt(3))) < 1e-12


@pytest.mark.parametrize("q", PRIMES)
def test_gauss_sum_modulus(q):
    for a in (1, find_nonsquare(q)):
        assert abs(abs(gauss_sum(AdditiveCharacter(q, a))) - math.sqrt(q)) < 1e-9


@pytest.mark.parametrize("q", [3, 5, 7])
def test_form_gauss_sum(q):
    psi = AdditiveCharacter(q)
    for b in range(1, q):
        direct = sum(psi(-half(q) * b * y * y) for y in range(q))
        assert abs(form_gauss_sum(b, psi) - direct) < 1e-9
        assert abs(abs(form_gauss_sum(b, psi)) - math.sqrt(q)) < 1e-9
    assert abs(abs(form_gauss_sum([[1, 0], [0, 1]], psi)) - q) < 1e-9


@pytest.mark.parametrize("q", [3, 5, 7])
def test_quadratic_sum_against_enumeration(q):
    psi = AdditiveCharacter(q, 2)
    pts = np.array(list(itertools.product(range(q), repeat=2)))
    mats = [np.array([[a, b], [b, c]]) for a in range(q) for b in range(q) for c in range(q)]
    fast = quadratic_sum(np.stack(mats), psi)
    for M, f in zip(mats, fast):
        direct = psi(np.einsum("ij,jk,ik->i", pts, M, pts) % q).sum()
        assert abs(f - direct) < 1e-9
    for m in range(q):
        assert abs(quadratic_sum([[m]], psi) - psi(m * np.arange(q) ** 2 % q).sum()) < 1e-9
