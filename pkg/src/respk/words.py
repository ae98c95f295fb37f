"""Reduced words in finitely generated free groups.

A letter is a nonzero int: ``+(i + 1)`` is generator ``i`` and ``-(i + 1)`` its
inverse.  Words are reduced when built and never mutated afterwards.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Alphabet",
    "Word",
    "reduce_letters",
    "commutator",
    "gamma",
    "surface_alphabet",
    "is_conjugate_free",
    "WordSyntaxError",
]


class WordSyntaxError(ValueError):
    pass


def reduce_letters(raw: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in raw:
        if a == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class Word:
    """Freely reduced word; supports ``*``, ``**`` and ``inv``."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = (), *, reduced: bool = False):
        self.letters = tuple(letters) if reduced else reduce_letters(letters)
        self._hash = None

    @classmethod
    def gen(cls, i: int, sign: int = 1) -> "Word":
        return cls(((i + 1) * sign,), reduced=True)

    @classmethod
    def identity(cls) -> "Word":
        return _EMPTY

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item])
        return self.letters[item]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return (len(self), self.letters) < (len(other), other.letters)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"

    def __mul__(self, other: "Word") -> "Word":
        a, b = self.letters, other.letters
        i = 0
        n = min(len(a), len(b))
        while i < n and a[-1 - i] == -b[i]:
            i += 1
        return Word(a[: len(a) - i] + b[i:], reduced=True)

    def inv(self) -> "Word":
        return Word(tuple(-a for a in reversed(self.letters)), reduced=True)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inv() ** (-n)
        core, conj = self.cyclic_reduce()
        body = Word(core.letters * n, reduced=True)
        return conj * body * conj.inv()

    def conj(self, f: "Word") -> "Word":
        """Return ``f * self * f^-1``."""
        return f * self * f.inv()

    def support(self) -> frozenset[int]:
        return frozenset(abs(a) - 1 for a in self.letters)

    def abelianize(self, rank: int) -> tuple[int, ...]:
        v = [0] * rank
        for a in self.letters:
            v[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(v)

    def exponent_sum(self, gen: int) -> int:
        return sum((1 if a > 0 else -1) for a in self.letters if abs(a) == gen + 1)

    def max_generator(self) -> int:
        return max((abs(a) for a in self.letters), default=0)

    def cyclic_reduce(self) -> tuple["Word", "Word"]:
        """Return ``(core, conjugator)`` with ``self = conjugator * core * conjugator^-1``."""
        a = self.letters
        i, j = 0, len(a) - 1
        while i < j and a[i] == -a[j]:
            i += 1
            j -= 1
        return Word(a[i : j + 1], reduced=True), Word(a[:i], reduced=True)

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def canonical_rotation(self) -> tuple["Word", int]:
        """Least rotation of a cyclically reduced word and the offset producing it."""
        a = self.letters
        if not a:
            return self, 0
        best, best_r = a, 0
        for r in range(1, len(a)):
            rot = a[r:] + a[:r]
            if rot < best:
                best, best_r = rot, r
        return Word(best, reduced=True), best_r

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Image under the endomorphism sending generator i to ``images[i]``."""
        inv_cache: dict[int, Word] = {}
        out: list[int] = []
        for a in self.letters:
            if a > 0:
                w = images[a - 1]
            else:
                w = inv_cache.get(a)
                if w is None:
                    w = inv_cache[a] = images[-a - 1].inv()
            for b in w.letters:
                if out and out[-1] == -b:
                    out.pop()
                else:
                    out.append(b)
        return Word(out, reduced=True)


_EMPTY = Word((), reduced=True)


def commutator(a: Word, b: Word) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inv() * b.inv() * a * b


def gamma(n: int, offset: int = 0) -> Word:
    """Surface relator ``[x1, y1] ... [xn, yn]`` with ``x_j, y_j`` at ``offset + 2(j-1), +1``."""
    if n < 1:
        raise ValueError("genus of a factor must be positive")
    w = Word()
    for j in range(n):
        x = Word.gen(offset + 2 * j)
        y = Word.gen(offset + 2 * j + 1)
        w = w * commutator(x, y)
    return w


def is_conjugate_free(g: Word, h: Word) -> Word | None:
    """Return ``f`` with ``f h f^-1 = g``, or ``None`` if ``g`` and ``h`` are not conjugate."""
    cg, ag = g.cyclic_reduce()
    ch, ah = h.cyclic_reduce()
    if len(cg) != len(ch):
        return None
    if not cg:
        return ag * ah.inv()
    doubled = ch.letters + ch.letters
    n = len(ch)
    target = cg.letters
    for r in range(n):
        if doubled[r : r + n] == target:
            rot = Word(ch.letters[:r], reduced=True)
            f = ag * rot.inv() * ah.inv()
            return f
    return None


_FACTOR = re.compile(r"^([^\s*^,;()]+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.names)) != len(self.names):
            raise ValueError("alphabet names must be distinct")
        for name in self.names:
            if name == "1" or not _FACTOR.match(name):
                raise ValueError(f"bad generator name {name!r}")

    @classmethod
    def standard(cls, rank: int) -> "Alphabet":
        if rank <= 3:
            return cls(("x", "y", "z")[:rank])
        return cls(tuple(f"x{i + 1}" for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordSyntaxError(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> Word:
        return Word.gen(self.index(name))

    def format(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        for _, run in itertools.groupby(w.letters):
            run = list(run)
            name = self.names[abs(run[0]) - 1]
            e = len(run) if run[0] > 0 else -len(run)
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def parse(self, text: str) -> Word:
        text = text.strip()
        if text == "1":
            return Word()
        if not text:
            raise WordSyntaxError("empty word literal (use '1')")
        letters: list[int] = []
        for tok in text.split("*"):
            m = _FACTOR.match(tok.strip())
            if not m:
                raise WordSyntaxError(f"bad factor {tok!r}")
            i = self.index(m.group(1)) + 1
            e = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend([i if e > 0 else -i] * abs(e))
        return Word(letters)

    def check(self, w: Word) -> None:
        if w.max_generator() > self.rank:
            raise ValueError("word uses generators outside the alphabet")


def surface_alphabet(n: int, prime: bool = False) -> Alphabet:
    tick = "'" if prime else ""
    names: list[str] = []
    for j in range(1, n + 1):
        names += [f"x{tick}{j}", f"y{tick}{j}"]
    return Alphabet(tuple(names))
