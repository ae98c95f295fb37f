import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_products, closure_naive, conjugate_by_scan, random_word

from respk.errors import CapExceeded, HypothesisViolated
from respk.magnus import magnus_hom
from respk.pgroups import (
    Cyclic,
    Direct,
    PHom,
    TruncUnits,
    WreathCyclic,
    direct_combine,
    enumerate_image,
    induced_wreath,
    is_conjugate_finite,
    parse_group,
    power_divisibility_check,
    trivial_hom,
)
from respk.schreier import ExponentHom
from respk.words import Alphabet, Word

A2 = Alphabet.standard(2)
X, Y = Word.gen(0), Word.gen(1)
W22 = WreathCyclic(2, Cyclic(2, 1), 1)


def test_element_orders():
    C4 = Cyclic(2, 2)
    assert C4.elem_order(1) == 4 and C4.elem_order(2) == 2
    assert Direct(2, [Cyclic(2, 1), Cyclic(2, 2)]).elem_order((1, 1)) == 4
    t = ((0, 0), 1)
    assert W22.mul(t, t) == W22.identity()


def test_wreath_rule():
    assert W22.mul(((1, 0), 0), ((0, 1), 0)) == ((1, 1), 0)
    top, back = ((0, 0), 1), ((0, 0), -1 % 2)
    for b in [(0, 1), (1, 0), (1, 1)]:
        assert W22.mul(W22.mul(top, (b, 0)), back) == ((b[1], b[0]), 0)
    W = WreathCyclic(2, Cyclic(2, 1), 2)
    assert W.elem_order(((0, 0, 0, 0), 2)) == 2


def test_hom_evaluation():
    phi = PHom(A2, Cyclic(2, 2), [1, 0])
    assert phi(Word()) == 0
    assert phi(X * X.inv()) == 0
    assert phi(X**3 * Y) == 3


def test_direct_combine_examples():
    f1 = PHom(A2, Cyclic(2, 1), [1, 0])
    f2 = PHom(A2, Cyclic(2, 1), [0, 1])
    both = direct_combine(f1, f2)
    assert not any(both.kills(w) for w in (X, Y, X * Y))
    with_trivial = direct_combine(trivial_hom(A2, 2), f1)
    for w in (X, Y, X * X, X * Y):
        assert with_trivial.kills(w) == f1.kills(w)
    with pytest.raises(ValueError):
        direct_combine(f1, PHom(Alphabet.standard(3), Cyclic(2, 1), [1, 0, 0]))


def test_direct_combine_kernel_law_on_random_words():
    rng = random.Random(0)
    f1 = magnus_hom(A2, 2, 3)
    f2 = PHom(A2, Cyclic(2, 2), [1, 3])
    both = direct_combine(f1, f2)
    for _ in range(100):
        w = Word(random_word(rng, 2, 8))
        assert both.kills(w) == (f1.kills(w) and f2.kills(w))


def _beta_example():
    mu = ExponentHom((1, 0), 0, 2)
    values = {Word(): 0, Y: 1, X * Y * X.inv(): 0, X * X: 0}

    def beta(w):
        return values[w]

    return mu, induced_wreath(mu, beta, Cyclic(2, 1), A2)


def test_induced_wreath_example():
    _, phi = _beta_example()
    assert phi(Y) == ((1, 0), 0)
    assert phi(X) == ((0, 0), 1)
    assert phi(X * Y * X.inv()) == ((0, 1), 0)
    assert phi.kills(X * X)


def test_induced_wreath_multiplicative_and_kernel_law():
    rng = random.Random(2)
    mu = ExponentHom((1, 1), 0, 4)
    beta_hom = magnus_hom(A2, 2, 3)
    phi = induced_wreath(mu, beta_hom, beta_hom.target, A2)
    W = phi.target
    for _ in range(200):
        u, v = Word(random_word(rng, 2, 6)), Word(random_word(rng, 2, 6))
        assert phi(u * v) == W.mul(phi(u), phi(v))
    checked = 0
    while checked < 50:
        w = Word(random_word(rng, 2, 8))
        if mu(w):
            continue
        killed = all(beta_hom.kills(X ** (-i) * w * X**i) for i in range(4))
        assert phi.kills(w) == killed
        checked += 1


def test_enumerate_image_sizes():
    assert len(enumerate_image(PHom(Alphabet.standard(1), Cyclic(2, 3), [1]))) == 8
    assert len(enumerate_image(trivial_hom(A2, 2))) == 1
    full = PHom(A2, W22, [((0, 0), 1), ((1, 0), 0)])
    elems = enumerate_image(full)
    assert len(elems) == 8
    assert elems == closure_naive(set(full.images) | {W22.identity()}, W22.mul)
    with pytest.raises(CapExceeded):
        enumerate_image(full, cap=5)


def test_finite_conjugacy_examples():
    G = Cyclic(2, 3)
    assert is_conjugate_finite(G, 3, 3, gens=[1]) == 0
    assert is_conjugate_finite(G, 3, 5, gens=[1]) is None
    s = is_conjugate_finite(W22, ((1, 0), 0), ((0, 1), 0), gens=[((0, 0), 1), ((1, 0), 0)])
    assert s is not None and s[1] == 1
    assert W22.conj(s, ((1, 0), 0)) == ((0, 1), 0)


def test_finite_conjugacy_agrees_with_scan():
    phi = magnus_hom(A2, 2, 4)
    G = phi.target
    elems = list(enumerate_image(phi))
    rng = random.Random(3)
    for _ in range(20):
        g, h = rng.choice(elems), rng.choice(elems)
        found = is_conjugate_finite(G, g, h, gens=phi.images)
        assert (found is not None) == conjugate_by_scan(G, elems, g, h)


def test_power_divisibility():
    C = Cyclic(2, 2)
    with pytest.raises(HypothesisViolated) as info:
        power_divisibility_check(C, 1, 2)
    assert info.value.r == 0
    phi = magnus_hom(A2, 2, 4)
    G = phi.target
    omega, xi = phi(X), phi(Y)
    rep = power_divisibility_check(G, omega, xi, 0, pairs=[(0, 0)])
    assert rep.holds and rep.solutions == [(0, 0)]
    rep = power_divisibility_check(G, omega, xi, 0)
    assert rep.holds
    N = G.elem_order(omega)
    brute = [(a, b) for a in range(N) for b in range(N) if G.power(omega, a) == G.conj(xi, G.power(omega, b))]
    assert sorted(rep.solutions) == brute


GROUPS = [
    Cyclic(3, 2),
    Direct(2, [Cyclic(2, 1), Cyclic(2, 2)]),
    WreathCyclic(2, Cyclic(2, 2), 1),
    WreathCyclic(3, Direct(3, [Cyclic(3, 1), Cyclic(3, 1)]), 1),
    TruncUnits(2, 2, 4),
    TruncUnits(3, 2, 3, 2),
]


def _random_elem(G, rng):
    if isinstance(G, Cyclic):
        return rng.randrange(G.p**G.e)
    if isinstance(G, Direct):
        return tuple(_random_elem(F, rng) for F in G.factors)
    if isinstance(G, WreathCyclic):
        coords = tuple(_random_elem(G.base, rng) for _ in range(G.p**G.s))
        return (coords, rng.randrange(G.p**G.s))
    gens = [G.power(G.gen(rng.randrange(G.m)), rng.choice((1, -1))) for _ in range(6)]
    return all_products(G, gens)


def _is_power_of(n, p):
    while n % p == 0:
        n //= p
    return n == 1


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.format())
@given(st.randoms(use_true_random=False))
def test_group_axioms(G, rng):
    a, b, c = (_random_elem(G, rng) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.identity()) == a == G.mul(G.identity(), a)
    assert G.is_identity(G.mul(a, G.inv(a)))
    n = G.elem_order(a)
    assert _is_power_of(n, G.p)
    assert G.order() % n == 0
    assert G.parse_elem(G.format_elem(a)) == a


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.format())
def test_group_expression_round_trip(G):
    assert parse_group(G.format(), G.p) == G
    assert parse_group(G.format(), G.p).format() == G.format()
