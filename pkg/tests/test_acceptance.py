"""The eight acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line that the terminal summary prints
after the run (see ``conftest.py``).  Failures are recorded before the
assertion fires so the summary never hides them.
"""

import random

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import conjugate_naive, random_word, words_up_to

from respk import certificate as certs
from respk.amalgam import (
    AmalgamElement,
    parse_surface_word,
    surface_abelianization,
    surface_amalgam,
    surface_separation_pipeline,
)
from respk.lab import (
    an_filtration_checks,
    bn_filtration_checks,
    check_commutator_containment,
    cyclic,
    dihedral,
    elementary_abelian,
    lower_p_series,
    quaternion,
    symmetric,
)
from respk.magnus import magnus_hom, order_exact_witness, residual_p_witness
from respk.schreier import ExponentHom, cover_basis, nielsen_reduce, rewrite_over_Z, stallings_graph
from respk.separation import (
    Conjugator,
    Witness,
    double_coset_decide,
    double_coset_witness,
    make_separator,
    separate_conjugacy_free,
)
from respk.truncpoly import TruncatedPoly, ring
from respk.words import Alphabet, Word, commutator, gamma, surface_alphabet


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def criterion(number):
    """Record FAIL with the exception text if the wrapped check raises."""

    def wrap(fn):
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                record(number, False, f"{type(exc).__name__}: {exc}"[:200])
                raise
            record(number, True, detail)

        run.__name__ = fn.__name__
        return run

    return wrap


X, Y = Word.gen(0), Word.gen(1)


@criterion(1)
def test_free_separation_all_short_pairs():
    A = Alphabet.standard(2)
    words = list(words_up_to(2, 6))
    counts = {}
    for p in (2, 3):
        sep = make_separator(p)
        n = 0
        for i, g in enumerate(words):
            for h in words[i + 1 :]:
                if len(g) + len(h) > 6 or conjugate_naive(g, h):
                    continue
                out = separate_conjugacy_free(Word(g), Word(h), p, A, separator=sep)
                assert isinstance(out, Witness), (g, h)
                cert = certs.parse(certs.emit(certs.from_free_witness(out, p)))
                rep = certs.verify(cert)
                assert rep.passed, (g, h, rep.messages)
                n += 1
        counts[p] = n

    rng = random.Random(11)
    for _ in range(200):
        g = Word(random_word(rng, 2, 6, 1))
        f = Word(random_word(rng, 2, 4))
        h = g.conj(f)
        assert conjugate_naive(g.letters, h.letters)
        out = separate_conjugacy_free(g, h, rng.choice((2, 3)), A)
        assert isinstance(out, Conjugator)
        assert h.conj(out.f) == g
    return f"{counts[2]} pairs at p=2 and {counts[3]} at p=3 verified; 200/200 conjugate pairs answered correctly"


@criterion(2)
def test_exact_order():
    A = Alphabet.standard(2)
    checked = 0
    for g in (X, X * Y, commutator(X, Y)):
        for p in (2, 3):
            for e in (1, 2):
                phi = order_exact_witness(g, e, p, A)
                G = phi.target
                a = phi(g)
                x, n = a, 1
                while not G.is_identity(x):
                    x = G.mul(x, a)
                    n += 1
                assert n == p**e, (g, p, e, n)
                checked += 1
    return f"{checked} cases with order exactly p^e by repeated multiplication"


@criterion(3)
def test_cover_basis():
    p = 2
    rng = random.Random(3)
    runs = 0
    for n in (1, 2):
        A = surface_alphabet(n)
        gw = gamma(n)
        for _ in range(50):
            g = Word(random_word(rng, 2 * n, 6))
            mu = ExponentHom(tuple(int(i == 0) for i in range(2 * n)), 0, p * p)
            l0 = mu(g)
            cb = cover_basis(n, p, l0=l0, names=A)
            assert cb.rank == p * p * (2 * n - 1) + 1
            assert cb.words[cb.z(0)] == gw
            assert len(nielsen_reduce(list(cb.words))) == cb.rank
            graph = stallings_graph(list(cb.words), 2 * n)
            assert graph.rank == cb.rank and graph.index == p * p
            w = g * X ** (-l0)
            assert mu(w) == 0 and cb.evaluate(rewrite_over_Z(w, cb)) == w
            z = cb.words[cb.z(l0)]
            assert g * gw * g.inv() == w * z * w.inv()
            runs += 1
    return f"{runs}/100 runs: |Z| = 5 and 13, gamma = z0, Nielsen and folding rank checks, conjugate of gamma identity"


@criterion(4)
def test_double_coset_witness():
    A = surface_alphabet(1)
    gw = gamma(1)
    rng = random.Random(4)
    pairs = []
    while len(pairs) < 50:
        g = Word(random_word(rng, 2, 5, 1))
        h = Word(random_word(rng, 2, 5, 1))
        if double_coset_decide(g, h, gw) is None:
            pairs.append((g, h))
    violations = 0
    for g, h in pairs:
        w = double_coset_witness(g, h, 1, 2, A)
        G = w.hom.target
        c, pg, ph = w.hom(gw), w.hom(g), w.hom(h)
        N = w.modulus
        assert G.is_identity(G.power(c, N))
        left = [G.mul(G.power(c, a), pg) for a in range(N)]
        right = [G.mul(ph, G.power(c, b)) for b in range(N)]
        violations += sum(1 for u in left for v in right if u == v)
        cert = certs.parse(certs.emit(certs.from_double_coset(w, 2, 1)))
        assert certs.verify(cert).passed
    assert violations == 0

    found = 0
    while found < 50:
        g = Word(random_word(rng, 2, 5, 1))
        if g in (gw, gw.inv()):
            continue
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        h = gw**a * g * gw ** (-b)
        sol = double_coset_decide(g, h, gw)
        assert sol is not None
        assert gw ** sol[0] * g == h * gw ** sol[1]
        assert sol == (a, b)
        found += 1
    return "50 witness tables exhaustively checked with 0 violations; 50/50 constructed exponents recovered"


def _random_syllable(rng, A, tag):
    F = A.factors[tag]
    while True:
        w = Word(random_word(rng, F.alphabet.rank, 3, 1))
        if F.c_exponent(w) is None:
            return (tag, w)


def _random_element(rng, A, syl):
    tag = rng.randrange(2)
    parts = []
    for i in range(syl):
        parts.append(_random_syllable(rng, A, (tag + i) % 2))
    parts.append((0, A.factors[0].gamma ** rng.randint(-1, 1)))
    return A.element(parts)


@criterion(5)
def test_amalgam_conjugacy():
    A = surface_amalgam(2)
    rng = random.Random(5)
    recovered = 0
    for _ in range(200):
        w, _ = A.cyclic_reduce(_random_element(rng, A, rng.randint(1, 6)))
        s = _random_element(rng, A, rng.randint(0, 3))
        h = w.conj(s)
        f = A.is_conjugate(w, h)
        assert f is not None
        assert h.conj(f) == w
        core_w, _ = A.cyclic_reduce(w)
        core_h, _ = A.cyclic_reduce(h)
        assert core_w.syl == core_h.syl
        recovered += 1
    rejected = 0
    while rejected < 50:
        g = _random_element(rng, A, rng.randint(1, 6))
        h = _random_element(rng, A, rng.randint(1, 6))
        if surface_abelianization(A, g) == surface_abelianization(A, h):
            continue
        assert A.is_conjugate(g, h) is None
        rejected += 1
    return f"{recovered}/200 conjugators recovered and checked; {rejected}/50 abelianization-distinct pairs rejected"


SURFACE_PAIRS = [
    ("x1*x'1", "x1"),
    ("x1*x'1", "y'1"),
    ("x1*y1*x'1*y'1", "x1^-1*y1^-1*x1*y1*x1"),
    ("x1*x'1", "x1*x'1*y1*y'1"),
    ("x1*x'1*y1*y'1", "x1*x'1"),
    ("x1^2*y'1", "y1*x'1*x1*y'1"),
    ("x1*x'1", "y1*y'1"),
    ("x1*x'1", "x1*y'1"),
    ("x1*x'1*y1*y'1", "x1*y'1*y1*x'1"),
    ("x1*x'1", "x1*x1^-1*y1^-1*x1*y1*x'1*y1^-1*x1^-1*y1*x1"),
    ("x1*x'1", "x1*x1^-1*y1^-1*x1*y1*x1^-1*y1^-1*x1*y1*x'1*y1^-1*x1^-1*y1*x1*y1^-1*x1^-1*y1*x1"),
    ("y1*x'1", "y1*x1^-1*y1^-1*x1*y1*x'1*y1^-1*x1^-1*y1*x1"),
    ("x1*y'1", "x1*x1^-1*y1^-1*x1*y1*y'1*y1^-1*x1^-1*y1*x1"),
    ("x1*x'1", "x1*x1^-1*y1^-1*x1*y1*x1^-1*y1^-1*x1*y1*x1^-1*y1^-1*x1*y1*x'1*y1^-1*x1^-1*y1*x1*y1^-1*x1^-1*y1*x1*y1^-1*x1^-1*y1*x1"),
    ("x1*x'1^-1", "x1^-1*x'1"),
    ("x1*x'1", "x1^-1*x'1^-1"),
    ("y1*y'1", "y1^-1*y'1"),
    ("x1*y1*x'1", "x1*x1^-1*y1^-1*x1*y1*x1^-1*y1^-1*x1*y1*x1^-1*y1^-1*x1*y1*y1*x'1*y1^-1*x1^-1*y1*x1*y1^-1*x1^-1*y1*x1*y1^-1*x1^-1*y1*x1"),
    ("x1^2*x'1", "x1*x'1^2"),
    ("x1*x'1*x1*y'1", "x1*y'1*x1*x'1^-1"),
]


@criterion(6)
def test_surface_pipeline():
    A = surface_amalgam(2)
    steps, cases = set(), set()
    for gs, hs in SURFACE_PAIRS:
        g, h = parse_surface_word(A, gs), parse_surface_word(A, hs)
        assert A.is_conjugate(g, h) is None, (gs, hs)
        core, _ = A.cyclic_reduce(g)
        assert core.syl >= 2
        w = surface_separation_pipeline(A, g, h, 2)
        assert not isinstance(w, AmalgamElement)
        T = w.hom.target
        pg, _ = T.cyclic_reduce(w.hom(core))
        assert pg.syl == core.syl
        for tag, s in core.raw_syllables():
            assert T.factors[tag].c_exponent(w.hom.homs[tag](s)) is None
        if w.step == "rotation":
            assert w.table_size > 0 and w.table_size % T.c_order == 0
        cert = certs.parse(certs.emit(certs.from_surface_witness(w, 2, 2)))
        assert certs.verify(cert).passed
        steps.add(w.step)
        cases.update(c.split(":")[0] for c in w.cases)
    assert {"factor", "length", "rotation"} <= steps
    assert "twist" in cases
    return f"{len(SURFACE_PAIRS)} pairs verified; steps {sorted(steps)}; rotation cases {sorted(cases)}"


@criterion(7)
def test_filtration_lab():
    orders = {name: [len(t) for t in lower_p_series(G, 2)] for name, G in (("D8", dihedral(8)), ("Q8", quaternion()))}
    assert orders == {"D8": [8, 2, 1], "Q8": [8, 2, 1]}
    s3 = lower_p_series(symmetric(3), 2)
    assert len(s3[-1]) == 3
    groups = [dihedral(8), quaternion(), cyclic(4), elementary_abelian(2, 2)]
    for G in groups:
        assert check_commutator_containment(G, 2, 4)
        an = an_filtration_checks(G, 2, 3)
        bn = bn_filtration_checks(G, 2, 3)
        assert an.ok, an.lines()
        assert bn.values["inn_in_all_Bn"], bn.lines()
    return "D8, Q8 series [8,2,1]; S3 stops at order 3; containment, A_n claims and Inn <= B_n hold on 4 groups to depth 3"


@criterion(8)
def test_magnus_backend():
    words = [w for w in words_up_to(2, 6) if w]
    A = Alphabet.standard(2)
    worst = 0
    for p in (2, 3):
        for w in words:
            phi = residual_p_witness(Word(w), p, A, k_max=8)
            assert phi.target.k <= 8
            worst = max(worst, phi.target.k)
    rng = random.Random(8)
    for _ in range(200):
        p = rng.choice((2, 3))
        phi = magnus_hom(A, p, rng.randint(2, 6))
        u, v = Word(random_word(rng, 2, 6)), Word(random_word(rng, 2, 6))
        assert phi(u * v) == phi.target.mul(phi(u), phi(v))
    for _ in range(200):
        p = rng.choice((2, 3))
        R = ring(p, 2, rng.randint(2, 7))
        terms = {(): 1}
        for _ in range(4):
            mono = tuple(rng.randrange(2) for _ in range(rng.randint(1, R.k - 1))) if R.k > 1 else ()
            if mono:
                terms[mono] = rng.randrange(p)
        a = TruncatedPoly.from_terms(R, terms)
        n = a.augmentation_part()
        assert a**p == TruncatedPoly.one(R) + n**p
    return f"all {len(words)} nontrivial words at p=2,3 with k <= {worst}; 200 multiplicativity and 200 p-th power samples"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
