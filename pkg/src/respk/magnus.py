"""Residual-p witnesses from truncated Magnus maps ``g_j -> 1 + e_j``.

Every map built here sends the generators in a chosen support to ``1 + e_j``
in a truncated unit group and all other generators to 1.  Restricting the
symbols to the support keeps the monomial space small.
"""

from __future__ import annotations

from typing import Iterable

from .errors import CapExceeded, PreconditionError
from .pgroups import PHom, TruncUnits, direct_combine
from .words import Alphabet, Word, commutator

__all__ = [
    "DEFAULT_TRUNC_CAP",
    "magnus_hom",
    "jennings_degree",
    "residual_p_witness",
    "order_exact_witness",
    "noncentral_witness",
    "twisted_commutator_witness",
]

DEFAULT_TRUNC_CAP = 32


def magnus_hom(alphabet: Alphabet, p: int, k: int, q: int | None = None,
               support: Iterable[int] | None = None) -> PHom:
    """Magnus map into ``U(m, k[, q])``; generators outside ``support`` go to 1."""
    gens = sorted(set(range(alphabet.rank) if support is None else support))
    if not gens:
        gens = [0]
    G = TruncUnits(p, len(gens), k, q)
    slot = {g: j for j, g in enumerate(gens)}
    images = [G.gen(slot[i]) if i in slot else G.identity() for i in range(alphabet.rank)]
    return PHom(alphabet, G, images)


def _support_of(words: Iterable[Word]) -> list[int]:
    s: set[int] = set()
    for w in words:
        s |= w.support()
    return sorted(s)


def jennings_degree(g: Word, p: int, alphabet: Alphabet | None = None, k_max: int = DEFAULT_TRUNC_CAP) -> int:
    """Least degree of a nonconstant term of the Magnus image of ``g`` over F_p."""
    if not g:
        raise PreconditionError("the identity has no Magnus degree")
    alphabet = alphabet or Alphabet.standard(g.max_generator())
    support = _support_of([g])
    for k in range(2, k_max + 1):
        phi = magnus_hom(alphabet, p, k, support=support)
        if not phi.kills(g):
            return k - 1
    raise CapExceeded("Magnus truncation degree", k_max)


def residual_p_witness(g: Word, p: int, alphabet: Alphabet | None = None,
                       k_max: int = DEFAULT_TRUNC_CAP) -> PHom:
    """``phi`` into a truncated unit group with ``phi(g) != 1``; ``k = degree + 1``."""
    alphabet = alphabet or Alphabet.standard(g.max_generator())
    d = jennings_degree(g, p, alphabet, k_max)
    phi = magnus_hom(alphabet, p, d + 1, support=_support_of([g]))
    if phi.kills(g):
        raise AssertionError("Magnus witness failed its own check")
    return phi


def order_exact_witness(g: Word, e: int, p: int, alphabet: Alphabet | None = None,
                        k_max: int = DEFAULT_TRUNC_CAP) -> PHom:
    """``phi`` with ``phi(g)`` of order exactly ``p^e``.

    With ``d`` the Magnus degree of ``g`` the truncation ``k = d p^(e-1) + 1``
    works because ``(1 + n)^(p^j) = 1 + n^(p^j)`` in characteristic p.  The
    order is re-checked by powering and ``k`` escalates if the check fails.
    """
    if e < 1:
        raise PreconditionError("order exponent must be >= 1")
    alphabet = alphabet or Alphabet.standard(g.max_generator())
    d = jennings_degree(g, p, alphabet, k_max)
    support = _support_of([g])
    k = d * p ** (e - 1) + 1
    while k <= max(k_max, d * p ** (e - 1) + 1):
        phi = magnus_hom(alphabet, p, k, support=support)
        if phi.target.elem_order(phi(g)) == p**e:
            return phi
        k += 1
    raise CapExceeded("order-exact truncation degree", k_max)


def noncentral_witness(g: Word, gamma_word: Word, p: int, alphabet: Alphabet | None = None,
                       k_max: int = DEFAULT_TRUNC_CAP) -> PHom:
    """``phi`` with ``[phi(g), phi(gamma)] != 1``, so ``phi(g)`` avoids ``<phi(gamma)>``."""
    c = commutator(g, gamma_word)
    if not c:
        raise PreconditionError("g commutes with gamma")
    return residual_p_witness(c, p, alphabet, k_max)


def twisted_commutator_words(f: Word, gamma_word: Word, e: int, p: int) -> list[Word]:
    out = []
    for r in range(e + 1):
        w = gamma_word ** (p**r)
        out.append(commutator(w, f.inv() * w * f))
    return out


def twisted_commutator_witness(f: Word, gamma_word: Word, e: int, p: int, alphabet: Alphabet | None = None,
                   k_max: int = DEFAULT_TRUNC_CAP) -> PHom:
    """``phi`` with ``[phi(gamma^(p^r)), phi(f)^-1 phi(gamma^(p^r)) phi(f)] != 1`` for ``r <= e``."""
    words = twisted_commutator_words(f, gamma_word, e, p)
    if any(not w for w in words):
        raise PreconditionError("f commutes with a power of gamma")
    alphabet = alphabet or Alphabet.standard(max(w.max_generator() for w in words))
    phi = direct_combine(*(residual_p_witness(w, p, alphabet, k_max) for w in words))
    for w in words:
        if phi.kills(w):
            raise AssertionError("combined commutator witness lost an inequality")
    return phi
