import math

import numpy as np
import pytest
from conftest import max_abs
from hypothesis import given, settings
from hypothesis import strategies as st

from tensorrank.field import AdditiveCharacter, find_nonsquare, gauss_sum, legendre
from tensorrank.group import GroupElement, enumerate_classes, group_array, torus, unipotent
from tensorrank.heisenberg import HeisenbergRep, SymplecticSpace, is_unitary, weyl_intertwining_residual
from tensorrank.oscillator import (
    OscillatorRep,
    bruhat_factor,
    char_omega_closed,
    component_dims,
    egorov_residual,
    embed_sl2,
    factorization_residual,
    gen_op,
    generator_element,
    generator_elements,
    homomorphism_residual,
    intertwining_number,
    omega,
    oscillator_pair,
    split_components,
    verify_oscillator_pair,
    word_product,
)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_generator_operators(q):
    psi = AdditiveCharacter(q)
    assert max_abs(gen_op("A", 0, psi) - np.eye(q)) < 1e-12
    assert max_abs(gen_op("C", 1, psi) - np.eye(q)) < 1e-12
    for b in range(1, q):
        assert is_unitary(gen_op("B", b, psi))
        assert is_unitary(gen_op("C", b, psi))
        A = gen_op("A", b, psi)
        assert max_abs(A - np.diag(np.diag(A))) == 0
    for kind in "BC":
        with pytest.raises(ValueError):
            gen_op(kind, 0, psi)
    with pytest.raises(ValueError):
        gen_op("D", 1, psi)


def test_bruhat_examples():
    q = 5
    assert bruhat_factor(GroupElement.identity(q)) == []
    assert bruhat_factor(GroupElement(0, -1, 1, 0, q)) == [("B", q - 1)]
    assert bruhat_factor(GroupElement(2, 3, 0, 3, q)) == [("C", 3), ("A", 4)]
    assert generator_element("C", 3, q) == GroupElement(2, 0, 0, 3, q)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_bruhat_words_multiply_back(q):
    for row in group_array(q):
        g = GroupElement(*row, q)
        assert word_product(bruhat_factor(g), q) == g


@pytest.mark.parametrize("q", [3, 5, 7])
def test_homomorphism_exhaustive(q):
    assert homomorphism_residual(OscillatorRep(AdditiveCharacter(q))) < 1e-7


@pytest.mark.parametrize("q", [3, 5, 7])
def test_egorov(q):
    for a in (1, find_nonsquare(q)):
        assert egorov_residual(OscillatorRep(AdditiveCharacter(q, a))) < 1e-7


@pytest.mark.parametrize("q", [3, 5])
def test_egorov_dual_pair_models(q):
    eps = find_nonsquare(q)
    for gram in ([[1, 0], [0, q - 1]], [[1, 0], [0, -eps % q]]):
        rep = OscillatorRep(AdditiveCharacter(q), gram)
        assert egorov_residual(rep) < 1e-7
        gens = generator_elements(q)[:9]
        assert homomorphism_residual(rep, [(g, h) for g in gens for h in gens]) < 1e-7


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_factorization_independence(q):
    assert factorization_residual(OscillatorRep(AdditiveCharacter(q)), samples=100) < 1e-7


@pytest.mark.parametrize("q", [3, 5, 7])
def test_weyl_transform_intertwines(q):
    psi = AdditiveCharacter(q)
    rep = OscillatorRep(psi)
    pi = HeisenbergRep(SymplecticSpace(1, q), psi)
    T = np.random.default_rng(q).normal(size=(q, q)) + 0j
    for g in generator_elements(q):
        assert weyl_intertwining_residual(pi, rep(g), embed_sl2(g, [[1]]), T) < 1e-9


def test_omega_examples():
    q = 5
    psi = AdditiveCharacter(q)
    rep = OscillatorRep(psi)
    assert max_abs(omega(GroupElement.identity(q), psi) - np.eye(q)) < 1e-12
    assert abs(rep.character(-GroupElement.identity(q)) - 1) < 1e-12
    assert max_abs(rep(unipotent(1, q)) @ rep(unipotent(1, q)) - rep(unipotent(2, q))) < 1e-12
    for row in group_array(q)[::7]:
        assert is_unitary(rep(GroupElement(*row, q)))


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_closed_form_character(q):
    for rep, sign in zip(oscillator_pair(q), (1, -1)):
        psi = AdditiveCharacter(q, 1)
        for c in enumerate_classes(q)[1:]:
            closed = char_omega_closed(c.rep, sign, psi)
            assert abs(rep.character(c.rep) - closed) < 1e-7
            assert abs(rep.trace_with(c.rep) - closed) < 1e-7


def test_closed_form_examples():
    q = 5
    psi = AdditiveCharacter(q)
    eps = find_nonsquare(q)
    assert char_omega_closed(unipotent(1, q), 1, psi) == gauss_sum(psi)
    assert char_omega_closed(unipotent(eps, q), 1, psi) == -gauss_sum(psi)
    assert char_omega_closed(torus(2, q), 1, psi) == -1
    assert legendre(3, q) == -1
    with pytest.raises(ValueError):
        char_omega_closed(GroupElement.identity(q), 1, psi)
    with pytest.raises(ValueError):
        char_omega_closed(unipotent(1, q), 0, psi)


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_component_split(q):
    rep = OscillatorRep(AdditiveCharacter(q))
    comp = split_components(rep)
    assert (comp.dim_even, comp.dim_odd) == component_dims(q)
    eye = np.eye(q)
    assert max_abs(comp.proj_even + comp.proj_odd - eye) < 1e-12
    assert max_abs(comp.proj_even @ comp.proj_even - comp.proj_even) < 1e-12
    assert max_abs(comp.proj_even @ comp.proj_odd) < 1e-12
    g = GroupElement(1, 1, 1, 2, q)
    assert abs(comp.char_even(g) + comp.char_odd(g) - rep.character(g)) < 1e-9


def test_component_dims_table():
    assert component_dims(5) == (3, 2)
    assert component_dims(7) == (3, 4)
    with pytest.raises(ValueError):
        split_components(OscillatorRep(AdditiveCharacter(5), [[1, 0], [0, 1]]))


@pytest.mark.parametrize("q", [5, 7, 11])
def test_oscillator_pair_isomorphism_classes(q):
    eps = find_nonsquare(q)
    for a in range(1, q):
        rep = verify_oscillator_pair(q, a)
        assert rep.ok
        assert rep.matches_plus == (legendre(a, q) == 1)
    # the two classes differ exactly where the Gauss sum enters
    r = verify_oscillator_pair(q, eps)
    assert set(r.differing_classes) == {"UnipPlus", "UnipMinus"}


@pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
def test_intertwining_number(q):
    assert abs(intertwining_number(OscillatorRep(AdditiveCharacter(q))) - 2) < 1e-8


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 10**6), st.sampled_from(["2+", "2-"]))
def test_fast_trace_matches_dense(q, seed, tag):
    """trace(P_h omega(g)) through the Gauss-sum formula against dense
    matrices, for arbitrary invertible h (not only isometries)."""
    from tensorrank.dualpair import QuadraticSpace, permutation_operator

    rng = np.random.default_rng(seed)
    G = group_array(q)
    g = GroupElement(*G[rng.integers(len(G))], q)
    while True:
        h = rng.integers(0, q, size=(2, 2))
        if round(np.linalg.det(h)) % q:
            break
    rep = OscillatorRep(AdditiveCharacter(q, int(rng.integers(1, q))), QuadraticSpace(tag, q).gram)
    dense = np.trace(permutation_operator(h, q) @ rep(g))
    assert abs(rep.trace_with(g, h) - dense) < 1e-8


@pytest.mark.parametrize("q", [3, 5, 7])
def test_trace_with_one_variable(q):
    rep = OscillatorRep(AdditiveCharacter(q))
    for row in group_array(q):
        g = GroupElement(*row, q)
        assert abs(rep.trace_with(g) - rep.character(g)) < 1e-9
        assert abs(rep.trace_with(g, [[q - 1]]) - np.trace(rep(-GroupElement.identity(q)) @ rep(g)) * legendre(-1, q)) < 1e-9


def test_gram_validation():
    with pytest.raises(ValueError):
        OscillatorRep(AdditiveCharacter(5), [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        OscillatorRep(AdditiveCharacter(5), [[1, 2], [0, 1]])
    assert math.isclose(abs(gauss_sum(AdditiveCharacter(7))), math.sqrt(7))
