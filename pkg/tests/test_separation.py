import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import conjugate_naive, random_word

from respk.errors import PreconditionError
from respk.pgroups import Cyclic, enumerate_image, is_conjugate_finite
from respk.separation import (
    Conjugator,
    Witness,
    double_coset_decide,
    double_coset_witness,
    least_power_above,
    lift_mu,
    separate_conjugacy_free,
    verify_double_coset_table,
    verify_node,
)
from respk.words import Alphabet, Word, commutator, gamma, surface_alphabet

A2 = Alphabet.standard(2)
X, Y = Word.gen(0), Word.gen(1)
G1 = gamma(1)


def _separates(w, g, h):
    G = w.hom.target
    elems = enumerate_image(w.hom)
    return is_conjugate_finite(G, w.hom(g), w.hom(h), elements=elems) is None


def test_identity_against_commutator():
    w = separate_conjugacy_free(Word(), commutator(X, Y), 2, A2)
    assert w.node.step == "trivial"
    assert not w.hom.kills(commutator(X, Y))


def test_distinct_generators_use_cyclic_quotient():
    w = separate_conjugacy_free(X, Y, 2, A2)
    assert w.node.step == "powers"
    assert w.hom.target == Cyclic(2, 2)
    assert w.hom.images == (1, 0)


def test_homology_step():
    w = separate_conjugacy_free(X * Y, X.inv() * Y, 2, A2)
    assert w.node.step == "homology"
    assert w.hom.target == Cyclic(2, 3)
    assert w.hom(X * Y) != w.hom(X.inv() * Y)


def test_commutator_and_its_inverse_need_a_lift():
    g, h = commutator(X, Y), commutator(Y, X)
    assert not conjugate_naive(g.letters, h.letters)
    w = separate_conjugacy_free(g, h, 2, A2)
    assert w.node.step == "lift" and w.node.depth() >= 2
    assert verify_node(w.node) in ("full-enumeration", "compositional")


def test_conjugate_inputs_return_conjugator():
    g = X * Y * Y
    f = Y * X.inv()
    out = separate_conjugacy_free(g, g.conj(f), 3, A2)
    assert isinstance(out, Conjugator)
    assert g.conj(f).conj(out.f) == g


def test_least_power_above():
    assert least_power_above(2, 4) == 8
    assert least_power_above(3, 0) == 1
    assert least_power_above(3, 8) == 9


def test_lift_mu_kills_both_words():
    g, h = commutator(X, Y), commutator(Y, X)
    mu = lift_mu(g, h, 2, 2)
    assert mu(g) == 0 and mu(h) == 0
    assert mu.values[mu.designated] == 1


@settings(max_examples=25)
@given(st.randoms(use_true_random=False), st.sampled_from([2, 3]))
def test_random_non_conjugate_pairs_are_separated(rng, p):
    g = Word(random_word(rng, 2, 5))
    h = Word(random_word(rng, 2, 5))
    out = separate_conjugacy_free(g, h, p, A2)
    if conjugate_naive(g.letters, h.letters):
        assert isinstance(out, Conjugator) and h.conj(out.f) == g
        return
    assert isinstance(out, Witness)
    verify_node(out.node)
    if out.mode == "full-enumeration":
        assert _separates(out, g, h)


def test_double_coset_decide_examples():
    assert double_coset_decide(X, G1 * X, G1) == (1, 0)
    assert double_coset_decide(X, X * G1**2, G1) == (0, -2)
    assert double_coset_decide(X, Y, G1) is None


def test_double_coset_witness_table():
    A = surface_alphabet(1)
    w = double_coset_witness(X, Y, 1, 2, A)
    assert verify_double_coset_table(w.hom, X, Y, G1) == w.modulus
    with pytest.raises(PreconditionError):
        double_coset_witness(X, G1 * X, 1, 2, A)


def test_double_coset_early_return():
    w = double_coset_witness(X, X * X, 1, 2, surface_alphabet(1))
    assert w.early and w.hom.target == Cyclic(2, 2)


def test_double_coset_witness_through_the_cover():
    rng = random.Random(6)
    A = surface_alphabet(1)
    done = 0
    while done < 5:
        g, h = Word(random_word(rng, 2, 4, 1)), Word(random_word(rng, 2, 4, 1))
        if double_coset_decide(g, h, G1) is not None or (h * g.inv()).exponent_sum(0) % 4:
            continue
        w = double_coset_witness(g, h, 1, 2, A)
        assert not w.early
        N = w.modulus
        G = w.hom.target
        c = w.hom(G1)
        lhs = {G.mul(G.power(c, a), w.hom(g)) for a in range(N)}
        rhs = {G.mul(w.hom(h), G.power(c, b)) for b in range(N)}
        assert not lhs & rhs
        done += 1
