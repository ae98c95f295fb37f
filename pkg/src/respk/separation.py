"""Conjugacy separation in free groups and double-coset witnesses.

``separate_conjugacy_free`` follows the classical induction on ``|g| + |h|``:
trivial element, single-generator powers, homology difference, and otherwise
an exponent map ``mu`` onto ``Z/p`` whose kernel is rewritten over its
Schreier basis, solved recursively, and lifted back through a wreath product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import CapExceeded, PreconditionError
from .magnus import DEFAULT_TRUNC_CAP, magnus_hom, residual_p_witness
from .pgroups import (
    DEFAULT_ENUM_CAP,
    Cyclic,
    PHom,
    conjugacy_search,
    direct_combine,
    induced_wreath,
)
from .schreier import (
    ExponentHom,
    SchreierBasis,
    choose_decreasing_i,
    cover_basis,
    rewrite_in_Y,
    rewrite_over_Z,
    schreier_generators,
)
from .words import Alphabet, Word, gamma, is_conjugate_free

__all__ = [
    "Conjugator",
    "Witness",
    "SeparationNode",
    "separate_conjugacy_free",
    "verify_node",
    "lift_mu",
    "double_coset_decide",
    "double_coset_witness",
    "DoubleCosetWitness",
    "verify_double_coset_table",
    "least_power_above",
]

DEFAULT_DEPTH_CAP = 12


def _cyclic_of_order(p: int, q: int) -> Cyclic:
    e = 0
    while p**e < q:
        e += 1
    return Cyclic(p, e)


def least_power_above(p: int, bound: int) -> int:
    """Least power of ``p`` strictly greater than ``bound``."""
    q = 1
    while q <= bound:
        q *= p
    return q


@dataclass
class SeparationNode:
    """One level of the separation recursion.

    ``step`` is ``trivial``, ``powers``, ``homology`` or ``lift``.  For ``lift``
    nodes ``mu`` and ``i0`` are set and ``children[i]`` separates
    ``(g_i0, h_i)`` over the Schreier alphabet.  ``swapped`` records whether
    the roles of the two cyclic cores were exchanged.
    """

    alphabet: Alphabet
    g: Word
    h: Word
    step: str
    hom: PHom
    swapped: bool = False
    mu: ExponentHom | None = None
    i0: int | None = None
    children: list["SeparationNode"] = field(default_factory=list)
    verification: str | None = None

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def count(self) -> int:
        return 1 + sum(c.count() for c in self.children)


@dataclass(frozen=True)
class Conjugator:
    f: Word


@dataclass
class Witness:
    hom: PHom
    node: SeparationNode
    mode: str


ConjOutcome = Union[Conjugator, Witness]


# -- lift: exponent map killing both words -------------------------------------------------


def _unimodular_to_e1(b: list[int]) -> list[list[int]]:
    """Integer matrix ``U`` with ``det U = +-1`` and ``U b = e1`` for primitive ``b``."""
    n = len(b)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    v = list(b)
    while sum(1 for t in v if t) > 1:
        i = min((j for j in range(n) if v[j]), key=lambda j: (abs(v[j]), j))
        for j in range(n):
            if j != i and v[j]:
                q = v[j] // v[i]
                v[j] -= q * v[i]
                U[j] = [a - q * c for a, c in zip(U[j], U[i])]
    i = next(j for j in range(n) if v[j])
    if abs(v[i]) != 1:
        raise ValueError("vector is not primitive")
    if v[i] < 0:
        U[i] = [-a for a in U[i]]
    U[0], U[i] = U[i], U[0]
    return U


def lift_mu(g: Word, h: Word, rank: int, p: int) -> ExponentHom:
    """Exponent map onto ``Z/p`` with ``mu(x) = 1`` for some ``x`` in ``Sup(g)`` and ``mu(g) = mu(h) = 0``.

    Needs ``[g] = [h]`` in homology and ``|Sup(g)| >= 2``.
    """
    hom = g.abelianize(rank)
    if hom != h.abelianize(rank):
        raise PreconditionError("homology classes differ")
    sup = sorted(g.support())
    if len(sup) < 2:
        raise PreconditionError("support of g must have at least two generators")
    nz = [i for i, a in enumerate(hom) if a]
    if not nz:
        x = sup[0]
        vals = [int(i == x) for i in range(rank)]
    elif len(nz) == 1:
        x = next(i for i in sup if i != nz[0])
        vals = [int(i == x) for i in range(rank)]
    else:
        m = math.gcd(*(hom[i] for i in nz))
        U = _unimodular_to_e1([hom[i] // m for i in nz])
        row = [c % p for c in U[1]]
        j = next(j for j, c in enumerate(row) if c)
        x = nz[j]
        scale = pow(row[j], -1, p)
        vals = [0] * rank
        for c, i in zip(row, nz):
            vals[i] = c * scale % p
    mu = ExponentHom(tuple(vals), x, p)
    if mu(g) or mu(h):
        raise AssertionError("exponent map does not kill g and h")
    return mu


# -- recursion --------------------------------------------------------------------------


class _Separator:
    def __init__(self, p: int, depth_cap: int, trunc_cap: int):
        self.p = p
        self.depth_cap = depth_cap
        self.trunc_cap = trunc_cap
        self.memo: dict = {}

    def node(self, g: Word, h: Word, alphabet: Alphabet, depth: int) -> SeparationNode:
        key = (g, h, alphabet)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._build(g, h, alphabet, depth)
        return hit

    def _build(self, g0: Word, h0: Word, alphabet: Alphabet, depth: int) -> SeparationNode:
        if depth > self.depth_cap:
            raise CapExceeded("recursion depth", self.depth_cap)
        p, rank = self.p, alphabet.rank
        g, _ = g0.cyclic_reduce()
        h, _ = h0.cyclic_reduce()
        if is_conjugate_free(g, h) is not None:
            raise AssertionError("recursive subproblem is conjugate")

        if not g or not h:
            w = h if not g else g
            phi = residual_p_witness(w, p, alphabet, self.trunc_cap)
            return SeparationNode(alphabet, g0, h0, "trivial", phi)

        sg, sh = g.support(), h.support()
        if len(sg) == 1 and len(sh) == 1:
            (x,) = sg
            n, m = g.exponent_sum(x), h.exponent_sum(next(iter(sh)))
            q = least_power_above(p, 2 * max(abs(n), abs(m)))
            G = _cyclic_of_order(p, q)
            phi = PHom(alphabet, G, [1 if i == x else 0 for i in range(rank)])
            return SeparationNode(alphabet, g0, h0, "powers", phi)

        ag, ah = g.abelianize(rank), h.abelianize(rank)
        if ag != ah:
            diffs = [(abs(a - b), i) for i, (a, b) in enumerate(zip(ag, ah)) if a != b]
            a, x = min(diffs)
            q = least_power_above(p, 2 * a)
            G = _cyclic_of_order(p, q)
            phi = PHom(alphabet, G, [1 if i == x else 0 for i in range(rank)])
            return SeparationNode(alphabet, g0, h0, "homology", phi)

        swapped = len(sg) == 1
        if swapped:
            g, h = h, g
        mu = lift_mu(g, h, rank, p)
        sb = schreier_generators(mu, alphabet)
        i0 = choose_decreasing_i(g, sb)
        gi0 = rewrite_in_Y(g, i0, sb)
        children = [self.node(gi0, rewrite_in_Y(h, i, sb), sb.alphabet, depth + 1) for i in range(p)]
        phi = lift_hom(mu, sb, [c.hom for c in children], alphabet)
        return SeparationNode(alphabet, g0, h0, "lift", phi, swapped, mu, i0, children)


def lift_hom(mu: ExponentHom, sb: SchreierBasis, child_homs: list[PHom], alphabet: Alphabet) -> PHom:
    beta = direct_combine(*child_homs)
    return induced_wreath(mu, lambda w: beta(rewrite_in_Y(w, 0, sb)), beta.target, alphabet)


def verify_node(node: SeparationNode, cap: int = DEFAULT_ENUM_CAP) -> str:
    """Check that ``node.hom`` separates the conjugacy classes of ``node.g`` and ``node.h``.

    Exhaustive conjugacy-class search is used when the target order is at most
    ``cap``; otherwise the node is checked from its own structure (and its
    children's checks for lift nodes).  Returns the mode used; raises
    ``AssertionError`` on failure.
    """
    phi = node.hom
    G = phi.target
    a, b = phi(node.g), phi(node.h)
    if G.log_order() * math.log(G.p) <= math.log(cap):
        conj, _ = conjugacy_search(G, phi.images, a, b, cap)
        if conj is not None:
            raise AssertionError("images are conjugate")
        node.verification = "full-enumeration"
        return node.verification
    if node.step == "trivial":
        if G.is_identity(a) == G.is_identity(b):
            raise AssertionError("exactly one image must be trivial")
    elif node.step in ("powers", "homology"):
        if a == b:
            raise AssertionError("abelian images coincide")
    elif node.step == "lift":
        _verify_lift(node, cap)
    else:
        raise AssertionError(f"unknown step {node.step}")
    node.verification = "compositional"
    return node.verification


def _verify_lift(node: SeparationNode, cap: int) -> None:
    mu = node.mu
    g, _ = node.g.cyclic_reduce()
    h, _ = node.h.cyclic_reduce()
    if node.swapped:
        g, h = h, g
    if mu.values[mu.designated] != 1 or mu(g) or mu(h):
        raise AssertionError("exponent map is not admissible")
    if mu.designated not in g.support():
        raise AssertionError("designated generator outside the support")
    sb = schreier_generators(mu, node.alphabet)
    p = mu.modulus
    if len(node.children) != p:
        raise AssertionError("wrong number of subproblems")
    gi0 = rewrite_in_Y(g, node.i0, sb)
    if len(gi0) >= len(g):
        raise AssertionError("chosen residue does not shorten g")
    for i, child in enumerate(node.children):
        if child.alphabet != sb.alphabet or child.g != gi0 or child.h != rewrite_in_Y(h, i, sb):
            raise AssertionError(f"subproblem {i} does not match the rewriting")
        verify_node(child, cap)
    expect = lift_hom(mu, sb, [c.hom for c in node.children], node.alphabet)
    if expect.target != node.hom.target or expect.images != node.hom.images:
        raise AssertionError("lifted images disagree with the subproblem witnesses")


def separate_conjugacy_free(g: Word, h: Word, p: int, alphabet: Alphabet | None = None, *,
                            cap: int = DEFAULT_ENUM_CAP, depth_cap: int = DEFAULT_DEPTH_CAP,
                            trunc_cap: int = DEFAULT_TRUNC_CAP,
                            separator: _Separator | None = None) -> ConjOutcome:
    """Conjugator ``f`` with ``f h f^-1 = g``, or a verified separating witness."""
    rank = max(g.max_generator(), h.max_generator(), 1)
    alphabet = alphabet or Alphabet.standard(rank)
    alphabet.check(g)
    alphabet.check(h)
    f = is_conjugate_free(g, h)
    if f is not None:
        return Conjugator(f)
    sep = separator or _Separator(p, depth_cap, trunc_cap)
    node = sep.node(g, h, alphabet, 0)
    mode = verify_node(node, cap)
    return Witness(node.hom, node, mode)


def make_separator(p: int, depth_cap: int = DEFAULT_DEPTH_CAP, trunc_cap: int = DEFAULT_TRUNC_CAP) -> _Separator:
    """A reusable separator whose memo table is shared across calls."""
    return _Separator(p, depth_cap, trunc_cap)


# -- double cosets of the surface relator ---------------------------------------------


def _gamma_exponent(x: Word, gamma_word: Word) -> int | None:
    L = len(gamma_word)
    if len(x) % L:
        return None
    k = len(x) // L
    if x == gamma_word**k:
        return k
    if x == gamma_word ** (-k):
        return -k
    return None


def _scan(g: Word, h: Word, gamma_word: Word, bound: int):
    hinv = h.inv()
    for r in range(bound + 1):
        for a in ((0,) if r == 0 else (r, -r)):
            b = _gamma_exponent(hinv * gamma_word**a * g, gamma_word)
            if b is not None and abs(b) <= bound:
                return a, b
    return None


def double_coset_decide(g: Word, h: Word, gamma_word: Word) -> tuple[int, int] | None:
    """``(a, b)`` with ``gamma^a g = h gamma^b`` in the exponent window, else ``None``."""
    bound = (len(g) + len(h)) // len(gamma_word) + 2
    sol = _scan(g, h, gamma_word, bound)
    if sol is None and _scan(g, h, gamma_word, 2 * bound + 2) is not None:
        raise AssertionError("double coset solution outside the exponent bound")
    return sol


@dataclass
class DoubleCosetWitness:
    hom: PHom
    modulus: int
    g: Word
    h: Word
    gamma: Word
    early: bool
    q: int | None = None
    k: int | None = None
    k0: int | None = None


def _runs(w: Word) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for a in w.letters:
        s, e = abs(a), (1 if a > 0 else -1)
        if out and out[-1][0] == s:
            out[-1] = (s, out[-1][1] + e)
        else:
            out.append((s, e))
    return out


def verify_double_coset_table(hom: PHom, g: Word, h: Word, gamma_word: Word) -> int:
    """Check ``phi(gamma)^a phi(g) != phi(h) phi(gamma)^b`` for all residues; return the modulus."""
    G = hom.target
    c = hom(gamma_word)
    N = G.elem_order(c)
    pg, ph = hom(g), hom(h)
    left, right = set(), set()
    cur = G.identity()
    for _ in range(N):
        left.add(G.mul(cur, pg))
        right.add(G.mul(ph, cur))
        cur = G.mul(cur, c)
    if left & right:
        raise AssertionError("double coset images meet")
    return N


def double_coset_witness(g: Word, h: Word, n: int, p: int, alphabet: Alphabet | None = None,
                         trunc_cap: int = DEFAULT_TRUNC_CAP) -> DoubleCosetWitness:
    """Map onto a finite p-group keeping ``gamma^a g != h gamma^b`` for all ``a, b``.

    The problem is turned into ``gamma^a g gamma^-b g^-1 != h g^-1`` and solved
    in the kernel of ``x1 -> 1`` mod ``p^2`` with the cover basis, where the
    finitely many candidate images are separated in a truncated algebra with
    symbol nilpotency ``q``.
    """
    gw = gamma(n)
    alphabet = alphabet or Alphabet(tuple(s for j in range(1, n + 1) for s in (f"x{j}", f"y{j}")))
    if double_coset_decide(g, h, gw) is not None:
        raise PreconditionError("g and h lie in the same double coset")
    M = p * p
    hp = h * g.inv()
    mu = ExponentHom(tuple(1 if i == 0 else 0 for i in range(2 * n)), 0, M)
    if mu(hp):
        phi = PHom(alphabet, Cyclic(p, 2), list(mu.values))
        N = verify_double_coset_table(phi, g, h, gw)
        return DoubleCosetWitness(phi, N, g, h, gw, True)

    l0 = mu(g)
    cb = cover_basis(n, p, l0=l0, names=alphabet)
    x1 = Word.gen(0)
    w = g * x1 ** (-l0)
    zeta = cb.z(l0)
    if g * gw * g.inv() != w * cb.words[zeta] * w.inv():
        raise AssertionError("conjugate of gamma is not w z w^-1")
    u = rewrite_over_Z(w, cb)
    z0 = cb.z(0) + 1
    letters = list(u.letters)
    while letters and abs(letters[0]) == z0:
        letters.pop(0)
    while letters and abs(letters[-1]) == zeta + 1:
        letters.pop()
    v = Word(letters, reduced=True)
    hz = rewrite_over_Z(hp, cb)
    exps = [abs(e) for _, e in _runs(v)] + [abs(e) for _, e in _runs(hz)]
    q = least_power_above(p, 2 * max(exps, default=0))
    q = max(q, p)
    support = (v.support() | hz.support() | {z0 - 1, zeta})

    for k in range(2, trunc_cap + 1):
        psi = magnus_hom(cb.alphabet, p, k, q, support=support)
        G = psi.target
        A, B = psi(cb.gamma_symbol), psi(Word.gen(zeta))
        V = psi(v)
        Vinv = G.inv(V)
        H = psi(hz)
        Apow = [G.identity()]
        for _ in range(q - 1):
            Apow.append(G.mul(Apow[-1], A))
        hit = False
        Bb = G.identity()
        for _ in range(q):
            tail = G.mul(G.mul(V, Bb), Vinv)
            for Aa in Apow:
                if G.mul(Aa, tail) == H:
                    hit = True
                    break
            if hit:
                break
            Bb = G.mul(Bb, B)
        if hit:
            continue
        phi = induced_wreath(cb.mu, lambda word: psi(rewrite_over_Z(word, cb)), G, alphabet)
        N = verify_double_coset_table(phi, g, h, gw)
        return DoubleCosetWitness(phi, N, g, h, gw, False, q, k, cb.k0)
    raise CapExceeded("double coset truncation degree", trunc_cap)
