"""Amalgamated products ``H1 *_C H2`` over a cyclic ``C = <gamma>``.

Factors are free groups with ``gamma`` the product of commutators, or finite
p-groups with a chosen element ``gamma``.  Elements are kept in a canonical
normal form ``r_1 r_2 ... r_l gamma^c`` where each ``r_i`` is the canonical
representative of its left coset ``r_i C`` inside its factor; two elements are
equal exactly when their normal forms coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable, Sequence

from .errors import NormalizationFailed, PreconditionError
from .magnus import DEFAULT_TRUNC_CAP, twisted_commutator_witness, noncentral_witness, order_exact_witness
from .pgroups import DEFAULT_ENUM_CAP, PGroup, PHom, conjugacy_search, direct_combine
from .separation import double_coset_decide, double_coset_witness
from .words import Alphabet, Word, gamma, is_conjugate_free, surface_alphabet

__all__ = [
    "FreeFactor",
    "FiniteFactor",
    "Amalgam",
    "AmalgamElement",
    "surface_amalgam",
    "parse_surface_word",
    "c_membership",
    "normal_form",
    "syl",
    "verify_surface_witness",
    "AmalgamHom",
    "SurfaceWitness",
    "separate_surface_pair",
    "surface_separation_pipeline",
    "rotation_table",
    "surface_abelianization",
    "DEFAULT_NORMALIZATIONS",
]


# -- factors ----------------------------------------------------------------------------


class FreeFactor:
    """Free group of rank ``2n`` with ``gamma = [x1, y1] ... [xn, yn]``."""

    finite = False

    def __init__(self, alphabet: Alphabet):
        if alphabet.rank % 2:
            raise ValueError("free factor needs even rank")
        self.alphabet = alphabet
        self.n = alphabet.rank // 2
        self.gamma = gamma(self.n)

    def identity(self) -> Word:
        return Word()

    def mul(self, a: Word, b: Word) -> Word:
        return a * b

    def inv(self, a: Word) -> Word:
        return a.inv()

    def is_identity(self, a: Word) -> bool:
        return not a

    def gamma_power(self, c: int) -> Word:
        return self.gamma**c

    def c_exponent(self, x: Word) -> int | None:
        L = len(self.gamma)
        if len(x) % L:
            return None
        k = len(x) // L
        if x == self.gamma**k:
            return k
        if k and x == self.gamma ** (-k):
            return -k
        return None

    def coset_rep(self, x: Word) -> tuple[Word, int]:
        """``(r, a)`` with ``x = r gamma^a`` and ``r`` the shortlex-least element of ``x C``."""
        bound = len(x) // (2 * self.n) + 1
        best, best_a = None, 0
        for a in range(-bound, bound + 1):
            y = x * self.gamma**a
            if best is None or y < best:
                best, best_a = y, a
        return best, -best_a

    def conjugate(self, x: Word, y: Word) -> Word | None:
        """``f`` with ``f y f^-1 = x`` inside the factor."""
        return is_conjugate_free(x, y)

    def double_coset_seeds(self, k: Word, g: Word) -> list[tuple[int, int]]:
        """All ``(a, b)`` with ``gamma^a k = g gamma^b`` (at most one since ``C`` is malnormal)."""
        sol = double_coset_decide(k, g, self.gamma)
        return [] if sol is None else [sol]

    def c_conjugates(self, x: Word) -> list[tuple[int, Word]]:
        """Exponents ``a`` and conjugators ``f`` with ``f gamma^a f^-1 = x`` in the factor."""
        core, _ = x.cyclic_reduce()
        L = len(self.gamma)
        if len(core) % L:
            return []
        k = len(core) // L
        out = []
        for a in sorted({k, -k}):
            f = is_conjugate_free(x, self.gamma**a)
            if f is not None:
                out.append((a, f))
        return out

    def format(self, x: Word) -> str:
        return self.alphabet.format(x)

    def sort_key(self, x: Word):
        return (len(x), x.letters)


class FiniteFactor:
    """Finite p-group factor generated by ``gens`` with distinguished element ``gamma``."""

    finite = True

    def __init__(self, group: PGroup, gamma_elem, gens: Sequence, cap: int = DEFAULT_ENUM_CAP):
        self.group = group
        self.gamma = gamma_elem
        self.gens = tuple(gens)
        self.cap = cap
        self.order = group.elem_order(gamma_elem)
        self.powers = [group.identity()]
        for _ in range(self.order - 1):
            self.powers.append(group.mul(self.powers[-1], gamma_elem))
        self.power_index = {x: a for a, x in enumerate(self.powers)}

    def identity(self):
        return self.group.identity()

    def mul(self, a, b):
        return self.group.mul(a, b)

    def inv(self, a):
        return self.group.inv(a)

    def is_identity(self, a) -> bool:
        return self.group.is_identity(a)

    def gamma_power(self, c: int):
        return self.powers[c % self.order]

    def c_exponent(self, x) -> int | None:
        return self.power_index.get(x)

    def coset_rep(self, x):
        G = self.group
        best, best_a = None, 0
        for a, c in enumerate(self.powers):
            y = G.mul(x, c)
            if best is None or G.sort_key(y) < G.sort_key(best):
                best, best_a = y, a
        return best, (-best_a) % self.order

    def conjugate(self, x, y):
        f, _ = conjugacy_search(self.group, self.gens, y, x, self.cap)
        return f

    def double_coset_seeds(self, k, g):
        G = self.group
        ginv = G.inv(g)
        out = []
        for a, c in enumerate(self.powers):
            b = self.power_index.get(G.mul(G.mul(ginv, c), k))
            if b is not None:
                out.append((a, b))
        return out

    def c_conjugates(self, x):
        out = []
        for a, c in enumerate(self.powers):
            f = self.conjugate(x, c)
            if f is not None:
                out.append((a, f))
        return out

    def format(self, x) -> str:
        return self.group.format_elem(x)

    def sort_key(self, x):
        return self.group.sort_key(x)


# -- amalgam ------------------------------------------------------------------------------


@dataclass(frozen=True)
class AmalgamElement:
    """``r_1 ... r_l gamma^c``; ``syllables`` holds ``(factor tag, r_i)`` pairs."""

    amalgam: "Amalgam" = field(repr=False, compare=False, hash=False)
    syllables: tuple
    c: int

    @property
    def syl(self) -> int:
        return len(self.syllables)

    def __mul__(self, other: "AmalgamElement") -> "AmalgamElement":
        return self.amalgam.element(self.parts() + other.parts())

    def inv(self) -> "AmalgamElement":
        A = self.amalgam
        out = [(0, A.factors[0].gamma_power(-self.c))]
        for tag, r in reversed(self.syllables):
            out.append((tag, A.factors[tag].inv(r)))
        return A.element(out)

    def conj(self, f: "AmalgamElement") -> "AmalgamElement":
        return f * self * f.inv()

    def parts(self) -> list[tuple[int, Any]]:
        """Factor elements whose product is ``self`` (C-part as a gamma power of factor 0)."""
        out = list(self.syllables)
        if self.c:
            out.append((0, self.amalgam.factors[0].gamma_power(self.c)))
        return out

    def raw_syllables(self) -> list[tuple[int, Any]]:
        """A normal form ``g_1 ... g_l`` with the C-part absorbed into the last syllable."""
        if not self.syllables:
            return []
        out = list(self.syllables)
        tag, r = out[-1]
        F = self.amalgam.factors[tag]
        out[-1] = (tag, F.mul(r, F.gamma_power(self.c)))
        return out

    def is_cyclically_reduced(self) -> bool:
        return self.syl <= 1 or self.syl % 2 == 0

    def format(self) -> str:
        return self.amalgam.format(self)


class Amalgam:
    def __init__(self, f1, f2):
        self.factors = (f1, f2)
        if f1.finite != f2.finite:
            raise ValueError("factors must be both free or both finite")
        self.finite = f1.finite
        if self.finite and f1.order != f2.order:
            raise ValueError("gamma orders differ")
        self.c_order = f1.order if self.finite else None

    def _c(self, c: int) -> int:
        return c % self.c_order if self.finite else c

    def c_power(self, c: int) -> AmalgamElement:
        return AmalgamElement(self, (), self._c(c))

    def identity(self) -> AmalgamElement:
        return self.c_power(0)

    def factor_element(self, tag: int, x) -> AmalgamElement:
        return self.element([(tag, x)])

    def element(self, parts: Iterable[tuple[int, Any]]) -> AmalgamElement:
        """Normal form of the product of ``parts`` (pairs of factor tag and factor element)."""
        F = self.factors
        stack: list[tuple[int, Any]] = []
        lead = 0

        def absorb(c: int) -> None:
            nonlocal lead
            if stack:
                t, y = stack[-1]
                stack[-1] = (t, F[t].mul(y, F[t].gamma_power(c)))
            else:
                lead += c

        for tag, x in parts:
            c = F[tag].c_exponent(x)
            if c is not None:
                absorb(c)
                continue
            if stack and stack[-1][0] == tag:
                y = F[tag].mul(stack[-1][1], x)
                c = F[tag].c_exponent(y)
                if c is None:
                    stack[-1] = (tag, y)
                else:
                    stack.pop()
                    absorb(c)
            else:
                if not stack and lead:
                    x = F[tag].mul(F[tag].gamma_power(lead), x)
                    lead = 0
                stack.append((tag, x))
        carry = lead
        syll = []
        for tag, x in stack:
            if carry:
                x = F[tag].mul(F[tag].gamma_power(carry), x)
            r, carry = F[tag].coset_rep(x)
            syll.append((tag, r))
        return AmalgamElement(self, tuple(syll), self._c(carry))

    # conjugacy ------------------------------------------------------------------------

    def cyclic_reduce(self, g: AmalgamElement) -> tuple[AmalgamElement, AmalgamElement]:
        """``(core, f)`` with ``g = f core f^-1`` and ``core`` cyclically reduced."""
        f = self.identity()
        core = g
        while core.syl >= 3 and core.syl % 2 == 1:
            first = self.factor_element(*core.syllables[0])
            core = first.inv() * core * first
            f = f * first
        return core, f

    def is_conjugate(self, g: AmalgamElement, h: AmalgamElement) -> AmalgamElement | None:
        """``f`` with ``f h f^-1 = g``, or ``None``."""
        gs, A = self.cyclic_reduce(g)
        hs, B = self.cyclic_reduce(h)
        f = self._conj_reduced(gs, hs)
        if f is None:
            return None
        f = A * f * B.inv()
        if h.conj(f) != g:
            raise AssertionError("conjugator failed its check")
        return f

    def _conj_reduced(self, g: AmalgamElement, h: AmalgamElement) -> AmalgamElement | None:
        if g.syl != h.syl and max(g.syl, h.syl) >= 2:
            return None
        if g.syl <= 1:
            return self._conj_low(g, h)
        return self._conj_high(g, h)

    def _conj_high(self, g: AmalgamElement, h: AmalgamElement) -> AmalgamElement | None:
        L = g.syl
        gsyl = g.raw_syllables()
        hsyl = h.raw_syllables()
        for t in range(L):
            rot = hsyl[t:] + hsyl[:t]
            if rot[0][0] != gsyl[0][0]:
                continue
            tag = rot[0][0]
            for a, b in self.factors[tag].double_coset_seeds(rot[0][1], gsyl[0][1]):
                u = b
                ok = True
                for (tg, gi), (_, ki) in zip(gsyl[1:], rot[1:]):
                    F = self.factors[tg]
                    x = F.mul(F.mul(F.inv(gi), F.gamma_power(u)), ki)
                    u = F.c_exponent(x)
                    if u is None:
                        ok = False
                        break
                if ok and self._c(u - a) == 0:
                    # rot = P^-1 h P with P = h_1 ... h_t, and gamma^a rot gamma^-a = g
                    P = self.element(hsyl[:t])
                    return self.c_power(a) * P.inv()
        return None

    def _c_class(self, x: AmalgamElement) -> dict[int, AmalgamElement]:
        """C-exponents ``a`` with ``f gamma^a f^-1 = x``, keyed to such an ``f``."""
        if x.syl == 0:
            start = {x.c: self.identity()}
        else:
            tag, _ = x.syllables[0]
            y = x.raw_syllables()[0][1]
            start = {a: self.factor_element(tag, f) for a, f in self.factors[tag].c_conjugates(y)}
        if not self.finite:
            # gamma^a and gamma^b are conjugate in a free factor only when a = b
            return start
        seen = dict(start)
        frontier = list(start)
        while frontier:
            a = frontier.pop()
            for tag, F in enumerate(self.factors):
                for b, f in F.c_conjugates(F.gamma_power(a)):
                    if b not in seen:
                        # f gamma^b f^-1 = gamma^a, so seen[a] f gamma^b (seen[a] f)^-1 = x
                        seen[b] = seen[a] * self.factor_element(tag, f)
                        frontier.append(b)
        return seen

    def _conj_low(self, g: AmalgamElement, h: AmalgamElement) -> AmalgamElement | None:
        cg = self._c_class(g)
        if cg:
            ch = self._c_class(h)
            for a in sorted(set(cg) & set(ch)):
                return cg[a] * ch[a].inv()
            return None
        if h.syl != 1 or h.syllables[0][0] != g.syllables[0][0]:
            return None
        tag = g.syllables[0][0]
        f = self.factors[tag].conjugate(g.raw_syllables()[0][1], h.raw_syllables()[0][1])
        return None if f is None else self.factor_element(tag, f)

    # text -------------------------------------------------------------------------------

    def format(self, x: AmalgamElement) -> str:
        parts = []
        for tag, r in x.parts():
            s = self.factors[tag].format(r)
            if s != "1":
                parts.append(s)
        return "*".join(parts) if parts else "1"


def c_membership(factor, x) -> int | None:
    """``a`` with ``x = gamma^a`` in ``factor``, or ``None``."""
    return factor.c_exponent(x)


def normal_form(A: Amalgam, parts: Iterable[tuple[int, Any]]) -> AmalgamElement:
    return A.element(parts)


def syl(x: AmalgamElement) -> int:
    return x.syl


def surface_amalgam(genus: int) -> Amalgam:
    """Genus ``R`` surface group split as ``F(x1..y_n) *_C F(x'1..y'_m)`` with ``n = R - R // 2``."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    n, m = genus - genus // 2, genus // 2
    return Amalgam(FreeFactor(surface_alphabet(n)), FreeFactor(surface_alphabet(m, prime=True)))


def parse_surface_word(A: Amalgam, text: str) -> AmalgamElement:
    """Parse a word over the names of both free factors."""
    text = text.strip()
    if text == "1":
        return A.identity()
    names = {}
    for tag, F in enumerate(A.factors):
        for i, nm in enumerate(F.alphabet.names):
            names[nm] = (tag, i)
    parts: list[tuple[int, list[int]]] = []
    for tok in text.split("*"):
        tok = tok.strip()
        name, _, exp = tok.partition("^")
        if name not in names:
            raise ValueError(f"unknown generator {name!r}")
        tag, i = names[name]
        e = int(exp) if exp else 1
        letters = [(i + 1) if e > 0 else -(i + 1)] * abs(e)
        if parts and parts[-1][0] == tag:
            parts[-1][1].extend(letters)
        else:
            parts.append((tag, letters))
    return A.element([(tag, Word(ls)) for tag, ls in parts])


def surface_abelianization(A: Amalgam, x: AmalgamElement) -> tuple[int, ...]:
    """Exponent-sum vector; well defined because both gammas abelianize to zero."""
    vec: list[int] = []
    sums = [[0] * F.alphabet.rank for F in A.factors]
    for tag, w in x.parts():
        for i, v in enumerate(w.abelianize(A.factors[tag].alphabet.rank)):
            sums[tag][i] += v
    for s in sums:
        vec.extend(s)
    return tuple(vec)


# -- witnesses into amalgams of finite p-groups -----------------------------------------------


@dataclass
class AmalgamHom:
    """Pair of factor maps with ``phi1(gamma1)`` and ``phi2(gamma2)`` of equal order."""

    source: Amalgam
    homs: tuple[PHom, PHom]
    target: Amalgam

    @classmethod
    def build(cls, source: Amalgam, phi1: PHom, phi2: PHom, cap: int = DEFAULT_ENUM_CAP) -> "AmalgamHom":
        f1 = FiniteFactor(phi1.target, phi1(source.factors[0].gamma), phi1.images, cap)
        f2 = FiniteFactor(phi2.target, phi2(source.factors[1].gamma), phi2.images, cap)
        return cls(source, (phi1, phi2), Amalgam(f1, f2))

    def factor_image(self, tag: int, w: Word):
        return self.homs[tag](w)

    def __call__(self, x: AmalgamElement) -> AmalgamElement:
        return self.target.element([(tag, self.homs[tag](w)) for tag, w in x.parts()])


@dataclass
class SurfaceWitness:
    hom: AmalgamHom
    g: AmalgamElement
    h: AmalgamElement
    step: str
    cases: list[str]
    table_size: int
    e: int = 0
    swapped: bool = False


def _lcm_order_match(phi: list[PHom], gammas: list[Word], p: int, trunc_cap: int) -> list[PHom]:
    orders = [f.target.elem_order(f(gm)) for f, gm in zip(phi, gammas)]
    q = max(orders)
    e = round(math.log(q, p)) if q > 1 else 0
    out = []
    for f, gm, o in zip(phi, gammas, orders):
        if o != q:
            f = direct_combine(f, order_exact_witness(gm, e, p, f.alphabet, trunc_cap))
        out.append(f)
    return out


def _start_in_first(A: Amalgam, x: AmalgamElement) -> tuple[AmalgamElement, AmalgamElement]:
    """Rotate a cyclically reduced element of even syllable length to start in factor 0."""
    if x.syl >= 2 and x.syllables[0][0] == 1:
        first = A.factor_element(*x.syllables[0])
        return first.inv() * x * first, first
    return x, A.identity()


def rotation_table(phi: AmalgamHom, g: AmalgamElement, h: AmalgamElement) -> int:
    """Compare ``phi(g)`` with every ``gamma^a phi(h_rot) gamma^-a``; return the number of checks.

    ``g`` and ``h`` must be cyclically reduced of the same even syllable length
    and their images must keep that length.  Raises ``AssertionError`` on a match.
    """
    T = phi.target
    pg, ph = phi(g), phi(h)
    if pg.syl != g.syl or ph.syl != h.syl:
        raise AssertionError("syllable length not preserved")
    hs = ph.raw_syllables()
    N = T.c_order
    checks = 0
    for t in range(len(hs)):
        rot = hs[t:] + hs[:t]
        if rot[0][0] != pg.syllables[0][0]:
            continue
        r = T.element(rot)
        for a in range(N):
            checks += 1
            if r.conj(T.c_power(a)) == pg:
                raise AssertionError("images are conjugate")
    return checks


def separate_surface_pair(A: Amalgam, g: AmalgamElement, h: AmalgamElement, p: int,
                   cap: int = DEFAULT_ENUM_CAP, trunc_cap: int = DEFAULT_TRUNC_CAP) -> SurfaceWitness:
    """Map the surface amalgam to an amalgam of finite p-groups keeping ``g`` and ``h`` apart.

    ``g`` must be cyclically reduced of even syllable length ``>= 2`` and not
    conjugate to ``h``.
    """
    if g.syl < 2 or g.syl % 2:
        raise PreconditionError("g must be cyclically reduced of even syllable length >= 2")
    if A.is_conjugate(g, h) is not None:
        raise PreconditionError("g and h are conjugate")
    g0, h0 = g, h
    g, _ = _start_in_first(A, g)
    hs, _ = A.cyclic_reduce(h)
    hs, _ = _start_in_first(A, hs)
    gammas = [F.gamma for F in A.factors]
    alph = [F.alphabet for F in A.factors]

    def noncentral(words_by_tag: list[list[Word]]) -> list[list[PHom]]:
        return [
            [noncentral_witness(w, gammas[t], p, alph[t], trunc_cap) for w in words_by_tag[t]]
            for t in range(2)
        ]

    gsyl = g.raw_syllables()
    cover: list[list[Word]] = [[], []]
    for tag, w in gsyl:
        cover[tag].append(w)
    cases: list[str] = []
    e_used = 0
    extra: list[list[PHom]] = [[], []]
    if hs.syl <= 1:
        step = "factor"
    else:
        for tag, w in hs.raw_syllables():
            cover[tag].append(w)
        if hs.syl != g.syl:
            step = "length"
        else:
            step = "rotation"
            hsyl = hs.raw_syllables()
            L = len(hsyl)
            for t in range(0, L, 2):
                rot = hsyl[t:] + hsyl[:t]
                sols = []
                bad = None
                for i, ((tag, gi), (_, ki)) in enumerate(zip(gsyl, rot)):
                    sol = double_coset_decide(ki, gi, gammas[tag])
                    if sol is None:
                        bad = i
                        break
                    sols.append(sol)
                if bad is not None:
                    tag = gsyl[bad][0]
                    cases.append("first-factor" if tag == 0 else "second-factor")
                    dc = double_coset_witness(rot[bad][1], gsyl[bad][1], A.factors[tag].n, p, alph[tag], trunc_cap)
                    extra[tag].append(dc.hom)
                    continue
                # gamma^{a_i} k_i = g_i gamma^{b_i}; c_i = b_i - a_{i+1}
                cs = [sols[i][1] - sols[(i + 1) % L][0] for i in range(L)]
                u = math.gcd(*cs)
                if u == 0:
                    raise AssertionError("all twist exponents vanish for non-conjugate input")
                e = 0
                while u % p == 0:
                    u //= p
                    e += 1
                e_used = max(e_used, e)
                cases.append(f"twist:e={e}")
                for tag, gi in gsyl:
                    extra[tag].append(twisted_commutator_witness(gi, gammas[tag], e, p, alph[tag], trunc_cap))
    base = noncentral(cover)
    phis = []
    for t in range(2):
        homs = base[t] + extra[t]
        phis.append(direct_combine(*homs))
    phis = _lcm_order_match(phis, gammas, p, trunc_cap)
    hom = AmalgamHom.build(A, phis[0], phis[1], cap)
    table = verify_surface_witness(hom, g0, h0)
    return SurfaceWitness(hom, g0, h0, step, cases, table, e_used)


def verify_surface_witness(hom: AmalgamHom, g: AmalgamElement, h: AmalgamElement) -> int:
    """Independent checks of a surface witness; returns the rotation table size (0 if not needed)."""
    A, T = hom.source, hom.target
    g, _ = A.cyclic_reduce(g)
    g, _ = _start_in_first(A, g)
    hs, _ = A.cyclic_reduce(h)
    for tag, w in g.raw_syllables():
        if T.factors[tag].c_exponent(hom.homs[tag](w)) is not None:
            raise AssertionError("syllable image lies in the amalgamated subgroup")
    pg = hom(g)
    if pg.syl != g.syl:
        raise AssertionError("syllable length not preserved")
    ph, _ = T.cyclic_reduce(hom(hs))
    if ph.syl != pg.syl:
        return 0
    hs, _ = _start_in_first(A, hs)
    table = rotation_table(hom, g, hs)
    if T.is_conjugate(pg, hom(hs)) is not None:
        raise AssertionError("finite amalgam reports conjugate images")
    return table


# -- full pipeline ----------------------------------------------------------------------------


DEFAULT_NORMALIZATIONS = ("swap", "twist+", "twist-")


def _automorphism(A: Amalgam, name: str):
    F1, F2 = A.factors

    def apply(x: AmalgamElement) -> AmalgamElement:
        if name == "swap":
            if F1.alphabet.rank != F2.alphabet.rank:
                raise NormalizationFailed("factor swap needs equal genera")
            return A.element([(1 - t, w) for t, w in x.parts()])
        if name in ("twist+", "twist-"):
            s = 1 if name == "twist+" else -1
            gm = A.c_power(s)
            out = A.identity()
            for t, w in x.parts():
                piece = A.factor_element(t, w)
                out = out * (piece.conj(gm) if t == 1 else piece)
            return out
        raise ValueError(f"unknown normalization {name!r}")

    return apply


def surface_separation_pipeline(A: Amalgam, g: AmalgamElement, h: AmalgamElement, p: int,
                       normalizations: Sequence[str] = DEFAULT_NORMALIZATIONS, depth: int = 2,
                       cap: int = DEFAULT_ENUM_CAP, trunc_cap: int = DEFAULT_TRUNC_CAP):
    """Conjugator ``f`` (``f h f^-1 = g``) or a verified ``SurfaceWitness``.

    If neither element has syllable length ``>= 2`` after cyclic reduction the
    configured splitting-preserving automorphisms are tried; they cannot raise
    syllable length, so such inputs end in ``NormalizationFailed``.
    """
    if g.syl == 0 and g.c == 0 and h.syl == 0 and h.c == 0:
        return A.identity()
    f = A.is_conjugate(g, h)
    if f is not None:
        return f
    gs, _ = A.cyclic_reduce(g)
    hs, _ = A.cyclic_reduce(h)
    if gs.syl >= 2 or hs.syl >= 2:
        swapped = gs.syl < 2
        first, second = (hs, g) if swapped else (gs, h)
        w = separate_surface_pair(A, first, second, p, cap, trunc_cap)
        w.g, w.h, w.swapped = g, h, swapped
        return w
    for seq in (s for d in range(1, depth + 1) for s in product(normalizations, repeat=d)):
        x, y = g, h
        try:
            for name in seq:
                auto = _automorphism(A, name)
                x, y = auto(x), auto(y)
        except NormalizationFailed:
            continue
        xs, _ = A.cyclic_reduce(x)
        if xs.syl >= 2:
            raise NormalizationFailed("automorphism raised syllable length; pull-back not implemented")
    raise NormalizationFailed("no listed automorphism gives syllable length >= 2")
