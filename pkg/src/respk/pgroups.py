"""Concrete finite p-groups built from cyclic groups, direct products,
wreath products with a cyclic top, and truncated unit groups.

Elements are plain Python values: ``int`` for cyclic groups, tuples for direct
products, ``(base_tuple, top)`` for wreath products and ``TruncatedPoly`` for
unit groups.  A group object knows how to multiply, invert, print and parse
its own elements.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .errors import CapExceeded, HypothesisViolated
from .truncpoly import TruncatedPoly, ring
from .words import Alphabet, Word

__all__ = [
    "PGroup",
    "Trivial",
    "Cyclic",
    "Direct",
    "WreathCyclic",
    "TruncUnits",
    "PHom",
    "direct_combine",
    "induced_wreath",
    "enumerate_image",
    "conjugacy_search",
    "is_conjugate_finite",
    "power_divisibility_check",
    "parse_group",
    "DEFAULT_ENUM_CAP",
]

DEFAULT_ENUM_CAP = 10**6


def _p_exponent(n: int, p: int) -> int:
    e = 0
    while n % p == 0 and n > 1:
        n //= p
        e += 1
    if n != 1:
        raise ValueError(f"{n * p**e} is not a power of {p}")
    return e


def _split_top(text: str, sep: str) -> list[str]:
    depth, start, out = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(text[start:i])
            start = i + 1
    out.append(text[start:])
    return out


def _strip_parens(text: str) -> str:
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"expected parenthesized literal, got {text!r}")
    return text[1:-1]


class PGroup:
    """Abstract finite p-group; subclasses fix the element representation."""

    p: int

    def identity(self) -> Any:
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def log_order(self) -> int:
        """log_p of the group order."""
        raise NotImplementedError

    def format(self) -> str:
        raise NotImplementedError

    def format_elem(self, a) -> str:
        raise NotImplementedError

    def parse_elem(self, text: str):
        raise NotImplementedError

    def check(self, a) -> None:
        raise NotImplementedError

    def sort_key(self, a):
        raise NotImplementedError

    # shared helpers -----------------------------------------------------------

    def order(self) -> int:
        return self.p ** self.log_order()

    def eq(self, a, b) -> bool:
        return a == b

    def is_identity(self, a) -> bool:
        return a == self.identity()

    def power(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.identity()
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def elem_order(self, a) -> int:
        """Least ``p^t`` with ``a^(p^t) = 1``, found by repeated p-th powering."""
        q = 1
        for _ in range(self.log_order() + 1):
            if self.is_identity(a):
                return q
            a = self.power(a, self.p)
            q *= self.p
        raise AssertionError("element order exceeds group order")

    def conj(self, s, a):
        """``s a s^-1``."""
        return self.mul(self.mul(s, a), self.inv(s))

    def commutator(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def product(self, elems: Iterable):
        out = self.identity()
        for x in elems:
            out = self.mul(out, x)
        return out

    def __repr__(self):
        return self.format()

    def __eq__(self, other):
        return isinstance(other, PGroup) and self.p == other.p and self.format() == other.format()

    def __hash__(self):
        return hash((self.p, self.format()))


class Trivial(PGroup):
    def __init__(self, p: int):
        self.p = p

    def identity(self):
        return 0

    def mul(self, a, b):
        return 0

    def inv(self, a):
        return 0

    def log_order(self):
        return 0

    def format(self):
        return "1"

    def format_elem(self, a):
        return "0"

    def parse_elem(self, text):
        if text.strip() != "0":
            raise ValueError(f"bad element of trivial group: {text!r}")
        return 0

    def check(self, a):
        if a != 0:
            raise TypeError("trivial group element must be 0")

    def sort_key(self, a):
        return 0


class Cyclic(PGroup):
    """Z / p^e, written additively as residues."""

    def __init__(self, p: int, e: int):
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        self.p, self.e, self.n = p, e, p**e

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def power(self, a, n):
        return (a * n) % self.n

    def log_order(self):
        return self.e

    def format(self):
        return f"C({self.p}^{self.e})"

    def format_elem(self, a):
        return str(a)

    def parse_elem(self, text):
        text = text.strip()
        if not text.isdigit():
            raise ValueError(f"bad residue {text!r}")
        a = int(text)
        self.check(a)
        return a

    def check(self, a):
        if not isinstance(a, int) or not 0 <= a < self.n:
            raise TypeError(f"{a!r} is not a residue mod {self.n}")

    def sort_key(self, a):
        return a


class Direct(PGroup):
    def __init__(self, p: int, factors: Sequence[PGroup]):
        if not factors:
            raise ValueError("direct product needs at least one factor")
        for f in factors:
            if f.p != p:
                raise ValueError("all factors must share the prime")
        self.p = p
        self.factors = tuple(factors)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def power(self, a, n):
        return tuple(f.power(x, n) for f, x in zip(self.factors, a))

    def elem_order(self, a):
        return max(f.elem_order(x) for f, x in zip(self.factors, a))

    def is_identity(self, a):
        return all(f.is_identity(x) for f, x in zip(self.factors, a))

    def log_order(self):
        return sum(f.log_order() for f in self.factors)

    def format(self):
        return "D(" + ",".join(f.format() for f in self.factors) + ")"

    def format_elem(self, a):
        return "(" + ",".join(f.format_elem(x) for f, x in zip(self.factors, a)) + ")"

    def parse_elem(self, text):
        parts = _split_top(_strip_parens(text.strip()), ",")
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components, got {len(parts)}")
        return tuple(f.parse_elem(t) for f, t in zip(self.factors, parts))

    def check(self, a):
        if not isinstance(a, tuple) or len(a) != len(self.factors):
            raise TypeError("direct product element has wrong shape")
        for f, x in zip(self.factors, a):
            f.check(x)

    def sort_key(self, a):
        return tuple(f.sort_key(x) for f, x in zip(self.factors, a))


class WreathCyclic(PGroup):
    """``base wr Z/p^s`` with ``(b, c)(b', c') = (i -> b[i] b'[i + c], c + c')``."""

    def __init__(self, p: int, base: PGroup, s: int):
        if base.p != p:
            raise ValueError("base group must share the prime")
        self.p, self.base, self.s, self.n = p, base, s, p**s

    def identity(self):
        one = self.base.identity()
        return (tuple(one for _ in range(self.n)), 0)

    def mul(self, a, b):
        (x, c), (y, d) = a, b
        n, B = self.n, self.base
        return (tuple(B.mul(x[i], y[(i + c) % n]) for i in range(n)), (c + d) % n)

    def inv(self, a):
        x, c = a
        n, B = self.n, self.base
        return (tuple(B.inv(x[(j - c) % n]) for j in range(n)), (-c) % n)

    def is_identity(self, a):
        return a[1] == 0 and all(self.base.is_identity(x) for x in a[0])

    def log_order(self):
        return self.base.log_order() * self.n + self.s

    def format(self):
        return f"W({self.base.format()},{self.p}^{self.s})"

    def format_elem(self, a):
        x, c = a
        return "(" + ",".join(self.base.format_elem(v) for v in x) + f";{c})"

    def parse_elem(self, text):
        parts = _split_top(_strip_parens(text.strip()), ";")
        if len(parts) != 2:
            raise ValueError(f"wreath element needs exactly one ';': {text!r}")
        coords = _split_top(parts[0], ",")
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} base coordinates, got {len(coords)}")
        top = parts[1].strip()
        if not top.isdigit() or not 0 <= int(top) < self.n:
            raise ValueError(f"bad top residue {top!r}")
        return (tuple(self.base.parse_elem(t) for t in coords), int(top))

    def check(self, a):
        if not isinstance(a, tuple) or len(a) != 2 or len(a[0]) != self.n:
            raise TypeError("wreath element has wrong shape")
        if not isinstance(a[1], int) or not 0 <= a[1] < self.n:
            raise TypeError("bad top component")
        for x in a[0]:
            self.base.check(x)

    def sort_key(self, a):
        return (a[1], tuple(self.base.sort_key(x) for x in a[0]))


class TruncUnits(PGroup):
    """Units ``1 + n`` of the truncated algebra ``TruncRing(p, m, k, q)``."""

    def __init__(self, p: int, m: int, k: int, q: int | None = None):
        self.p, self.m, self.k, self.q = p, m, k, q
        self.ring = ring(p, m, k, q)

    def identity(self):
        return TruncatedPoly.one(self.ring)

    def gen(self, j: int) -> TruncatedPoly:
        return TruncatedPoly.unit_gen(self.ring, j)

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv()

    def power(self, a, n):
        return a**n

    def is_identity(self, a):
        return a.is_one()

    def log_order(self):
        return self.ring.unit_group_log_order()

    def format(self):
        q = "" if self.q is None else f",{self.q}"
        return f"U({self.m},{self.k}{q})"

    def format_elem(self, a):
        return a.format()

    def parse_elem(self, text):
        a = TruncatedPoly.parse(self.ring, text)
        self.check(a)
        return a

    def check(self, a):
        if not isinstance(a, TruncatedPoly) or a.ring != self.ring:
            raise TypeError("element is not in this truncated ring")
        if a.constant() != 1:
            raise TypeError("unit group elements have constant term 1")

    def sort_key(self, a):
        return a.sort_key()


# -- group expression syntax --------------------------------------------------

_POW = re.compile(r"^(\d+)\^(\d+)$")


def _parse_ppow(text: str, p: int) -> int:
    m = _POW.match(text.strip())
    if not m or int(m.group(1)) != p:
        raise ValueError(f"expected {p}^e, got {text!r}")
    return int(m.group(2))


def parse_group(text: str, p: int) -> PGroup:
    text = text.strip()
    if text == "1":
        return Trivial(p)
    if len(text) < 3 or text[1] != "(" or not text.endswith(")"):
        raise ValueError(f"bad group expression {text!r}")
    head, body = text[0], text[2:-1]
    args = _split_top(body, ",")
    if head == "C" and len(args) == 1:
        return Cyclic(p, _parse_ppow(args[0], p))
    if head == "D":
        return Direct(p, [parse_group(a, p) for a in args])
    if head == "W" and len(args) == 2:
        return WreathCyclic(p, parse_group(args[0], p), _parse_ppow(args[1], p))
    if head == "U" and len(args) in (2, 3):
        nums = [int(a) for a in args]
        return TruncUnits(p, nums[0], nums[1], nums[2] if len(nums) == 3 else None)
    raise ValueError(f"bad group expression {text!r}")


# -- homomorphisms from free groups -----------------------------------------------


class PHom:
    """Homomorphism from the free group on ``alphabet`` given by generator images."""

    def __init__(self, alphabet: Alphabet, target: PGroup, images: Sequence):
        if len(images) != alphabet.rank:
            raise ValueError("need exactly one image per generator")
        self.alphabet = alphabet
        self.target = target
        self.images = tuple(images)
        self._inverses = None

    def check(self) -> None:
        for a in self.images:
            self.target.check(a)

    def __call__(self, w: Word):
        return self.apply(w)

    def apply(self, w: Word):
        G = self.target
        if self._inverses is None:
            self._inverses = tuple(G.inv(a) for a in self.images)
        out = G.identity()
        for a in w.letters:
            out = G.mul(out, self.images[a - 1] if a > 0 else self._inverses[-a - 1])
        return out

    def kills(self, w: Word) -> bool:
        return self.target.is_identity(self.apply(w))

    def __repr__(self):
        imgs = ", ".join(
            f"{n}->{self.target.format_elem(a)}" for n, a in zip(self.alphabet.names, self.images)
        )
        return f"PHom({self.target.format()}: {imgs})"


def trivial_hom(alphabet: Alphabet, p: int) -> PHom:
    return PHom(alphabet, Trivial(p), [0] * alphabet.rank)


def direct_combine(*homs: PHom) -> PHom:
    """Product map into the direct product of the targets (kernel = intersection)."""
    if not homs:
        raise ValueError("need at least one homomorphism")
    A = homs[0].alphabet
    for h in homs[1:]:
        if h.alphabet != A:
            raise ValueError("homomorphisms must share the domain alphabet")
    if len(homs) == 1:
        return homs[0]
    p = homs[0].target.p
    G = Direct(p, [h.target for h in homs])
    images = [tuple(h.images[i] for h in homs) for i in range(A.rank)]
    return PHom(A, G, images)


def induced_wreath(mu, beta: Callable[[Word], Any], base: PGroup, alphabet: Alphabet) -> PHom:
    """Lift ``beta`` (defined on ``Ker mu``) to ``F -> base wr Z/M``.

    ``mu`` is an exponent homomorphism onto ``Z/M`` with designated generator
    ``x`` (``mu(x) = 1``).  Generator ``t`` goes to
    ``(i -> beta(x^i t x^-((i + mu(t)) mod M)), mu(t))``.
    """
    M = mu.modulus
    s = _p_exponent(M, base.p)
    W = WreathCyclic(base.p, base, s)
    x = Word.gen(mu.designated)
    images = []
    for t in range(alphabet.rank):
        tw = Word.gen(t)
        mt = mu.values[t] % M
        coords = []
        for i in range(M):
            d = x**i * tw * x ** (-((i + mt) % M))
            coords.append(beta(d))
        images.append((tuple(coords), mt))
    return PHom(alphabet, W, images)


# -- enumeration ------------------------------------------------------------------


def enumerate_image(hom: PHom, cap: int = DEFAULT_ENUM_CAP) -> set:
    """All elements of the subgroup generated by the generator images."""
    G = hom.target
    gens = [a for a in hom.images if not G.is_identity(a)]
    start = G.identity()
    seen = {start}
    queue = deque([start])
    while queue:
        a = queue.popleft()
        for s in gens:
            b = G.mul(a, s)
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise CapExceeded("image enumeration", cap)
                queue.append(b)
    return seen


def conjugacy_search(G: PGroup, gens: Sequence, g, h, cap: int = DEFAULT_ENUM_CAP):
    """Search the conjugacy class of ``g`` in ``<gens>`` for ``h``.

    Returns ``(conjugator or None, class_size)``; ``conjugator`` satisfies
    ``c g c^-1 = h``.  The class orbit is closed under conjugation by the
    generators, which is exhaustive because every inverse in a finite group
    is a positive power.
    """
    gens = [s for s in gens if not G.is_identity(s)]
    if g == h:
        return G.identity(), 1
    conj = {g: G.identity()}
    queue = deque([g])
    while queue:
        y = queue.popleft()
        cy = conj[y]
        for s in gens:
            z = G.conj(s, y)
            if z not in conj:
                cz = G.mul(s, cy)
                if z == h:
                    return cz, len(conj) + 1
                conj[z] = cz
                if len(conj) > cap:
                    raise CapExceeded("conjugacy class enumeration", cap)
                queue.append(z)
    return None, len(conj)


def is_conjugate_finite(G: PGroup, g, h, *, gens: Sequence | None = None, elements: Iterable | None = None,
                        cap: int = DEFAULT_ENUM_CAP):
    """Return ``s`` with ``s g s^-1 = h`` or ``None``.

    Exactly one of ``gens`` (search the generated subgroup) or ``elements``
    (search an explicit set) must be given.
    """
    if (gens is None) == (elements is None):
        raise ValueError("pass exactly one of gens= or elements=")
    if elements is not None:
        for count, s in enumerate(elements):
            if count >= cap:
                raise CapExceeded("conjugator scan", cap)
            if G.conj(s, g) == h:
                return s
        return None
    return conjugacy_search(G, gens, g, h, cap)[0]


@dataclass
class PowerDivisibilityReport:
    holds: bool
    solutions: list[tuple[int, int]]
    modulus: int
    divisor: int


def power_divisibility_check(G: PGroup, omega, xi, e: int = 0, pairs: Iterable[tuple[int, int]] | None = None) -> PowerDivisibilityReport:
    """Check ``omega^a = xi omega^b xi^-1  =>  p^(e+1) | a, b`` over residues mod ord(omega).

    The hypothesis ``[omega^(p^r), xi omega^(p^r) xi^-1] != 1`` is verified for
    every ``r <= e`` first; a failure raises ``HypothesisViolated(r)``.
    """
    p = G.p
    for r in range(e + 1):
        w = G.power(omega, p**r)
        if G.is_identity(G.commutator(w, G.conj(xi, w))):
            raise HypothesisViolated(r)
    N = G.elem_order(omega)
    powers = [G.identity()]
    for _ in range(N - 1):
        powers.append(G.mul(powers[-1], omega))
    conj_powers = [G.conj(xi, w) for w in powers]
    index = {}
    for b, w in enumerate(conj_powers):
        index.setdefault(w, []).append(b)
    if pairs is None:
        solutions = [(a, b) for a, w in enumerate(powers) for b in index.get(w, [])]
    else:
        solutions = [(a, b) for a, b in pairs if powers[a % N] == conj_powers[b % N]]
    d = p ** (e + 1)
    holds = all(a % d == 0 and b % d == 0 for a, b in solutions)
    return PowerDivisibilityReport(holds, solutions, N, d)
