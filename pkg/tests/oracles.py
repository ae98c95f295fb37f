"""Reference implementations used to check the package from outside.

Everything here is deliberately naive: repeated scanning instead of stacks,
whole-group enumeration instead of orbit search, dictionary polynomials
instead of the indexed kernels.
"""

from __future__ import annotations

import itertools
import random


# -- free groups --------------------------------------------------------------------------


def reduce_naive(letters):
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] == -out[i + 1]:
                del out[i : i + 2]
                changed = True
                break
    return tuple(out)


def inverse(letters):
    return tuple(-a for a in reversed(letters))


def cyclic_core(letters):
    w = list(reduce_naive(letters))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def conjugate_naive(g, h) -> bool:
    """Cyclic-word oracle: equal cores up to rotation."""
    a, b = cyclic_core(g), cyclic_core(h)
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[i:] + a[:i] == b for i in range(len(a)))


def reduced_words(rank: int, length: int):
    """All freely reduced words of exactly ``length`` letters."""
    letters = [i for j in range(1, rank + 1) for i in (j, -j)]
    if length == 0:
        yield ()
        return
    for w in reduced_words(rank, length - 1):
        for a in letters:
            if not w or w[-1] != -a:
                yield w + (a,)


def words_up_to(rank: int, length: int):
    for n in range(length + 1):
        yield from reduced_words(rank, n)


def random_word(rng: random.Random, rank: int, max_len: int, min_len: int = 0):
    n = rng.randint(min_len, max_len)
    w = []
    while len(w) < n:
        a = rng.choice([1, -1]) * rng.randint(1, rank)
        if w and w[-1] == -a:
            continue
        w.append(a)
    return tuple(w)


def exponent_sums(letters, rank):
    v = [0] * rank
    for a in letters:
        v[abs(a) - 1] += 1 if a > 0 else -1
    return tuple(v)


# -- finite groups -------------------------------------------------------------------------


def closure_naive(elements, mul):
    S = set(elements)
    while True:
        new = {mul(a, b) for a in S for b in S} | S
        if new == S:
            return S
        S = new


def conjugate_by_scan(G, elements, g, h):
    return any(G.conj(s, g) == h for s in elements)


# -- truncated Magnus expansion ---------------------------------------------------------


def magnus_naive(letters, support, p, k):
    """Dictionary polynomial ``{monomial: coefficient}`` of ``prod (1 + e_j)^{+-1}``, degree < k."""
    slot = {g: j for j, g in enumerate(sorted(support))}

    def mul(a, b):
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = ma + mb
                if len(m) < k:
                    out[m] = (out.get(m, 0) + ca * cb) % p
        return {m: c for m, c in out.items() if c}

    result = {(): 1}
    for a in letters:
        g = abs(a) - 1
        if g not in slot:
            continue
        j = slot[g]
        if a > 0:
            factor = {(): 1, (j,): 1}
        else:
            # (1 + e)^-1 = sum (-e)^t
            factor = {(j,) * t: (-1) ** t % p for t in range(k)}
        result = mul(result, factor)
    return result


def all_products(G, items):
    out = G.identity()
    for x in items:
        out = G.mul(out, x)
    return out


def iter_pairs(seq):
    return itertools.combinations(seq, 2)
