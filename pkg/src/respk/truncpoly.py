"""Truncated noncommutative polynomials over F_p.

``TruncRing(p, m, k, q)`` is F_p<e1..em> modulo all monomials of degree >= k
and, when ``q`` is set, every monomial containing ``q`` consecutive copies of
one symbol.  Its units with constant term 1 form a finite p-group.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import _kernels

__all__ = ["TruncRing", "TruncatedPoly", "ring"]


class TruncRing:
    __slots__ = ("p", "m", "k", "q", "off", "pw", "_key")

    def __init__(self, p: int, m: int, k: int, q: int | None = None):
        if m < 1 or k < 1:
            raise ValueError("need m >= 1 symbols and degree bound k >= 1")
        if q is not None and q < 2:
            raise ValueError("nilpotency exponent must be >= 2")
        self.p, self.m, self.k, self.q = p, m, k, q
        off = [0]
        for d in range(k):
            off.append(off[-1] + m**d)
        if off[-1] >= 2**62:
            raise OverflowError(f"monomial space of U({m},{k}) too large to index")
        self.off = np.array(off, np.int64)
        self.pw = np.array([m**j for j in range(k + 1)], np.int64) if m**k < 2**62 else np.array(
            [m**j if m**j < 2**62 else 0 for j in range(k + 1)], np.int64
        )
        self._key = (p, m, k, q)

    def __eq__(self, other):
        return isinstance(other, TruncRing) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"TruncRing(p={self.p}, m={self.m}, k={self.k}, q={self.q})"

    def index(self, mono: tuple[int, ...]) -> int:
        v = 0
        for s in mono:
            v = v * self.m + s
        return int(self.off[len(mono)]) + v

    def monomial(self, idx: int) -> tuple[int, ...]:
        d = int(np.searchsorted(self.off, idx, side="right")) - 1
        v = idx - int(self.off[d])
        out = []
        for _ in range(d):
            out.append(v % self.m)
            v //= self.m
        return tuple(reversed(out))

    def allowed(self, mono: tuple[int, ...]) -> bool:
        if len(mono) >= self.k:
            return False
        if self.q is None:
            return True
        run = 0
        for i, s in enumerate(mono):
            run = run + 1 if i and mono[i - 1] == s else 1
            if run >= self.q:
                return False
        return True

    def count_monomials(self, degree: int) -> int:
        """Number of surviving monomials of exactly ``degree``."""
        if degree >= self.k:
            return 0
        if self.q is None or degree == 0:
            return self.m**degree
        # runs[r] = words ending in a run of length r + 1
        runs = [self.m] + [0] * (self.q - 2)
        for _ in range(degree - 1):
            total = sum(runs)
            runs = [total * (self.m - 1)] + runs[:-1]
        return sum(runs)

    def unit_group_log_order(self) -> int:
        """log_p of the order of the group 1 + (augmentation ideal)."""
        return sum(self.count_monomials(d) for d in range(1, self.k))


@lru_cache(maxsize=None)
def ring(p: int, m: int, k: int, q: int | None = None) -> TruncRing:
    return TruncRing(p, m, k, q)


class TruncatedPoly:
    """Element of a ``TruncRing``, stored as sorted monomial indices with nonzero coefficients."""

    __slots__ = ("ring", "idx", "coef", "_hash")

    def __init__(self, R: TruncRing, idx, coef):
        self.ring = R
        idx = np.asarray(idx, np.int64)
        coef = np.asarray(coef, np.int64)
        idx.flags.writeable = False
        coef.flags.writeable = False
        self.idx = idx
        self.coef = coef
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def one(cls, R: TruncRing) -> "TruncatedPoly":
        return cls(R, [0], [1])

    @classmethod
    def from_terms(cls, R: TruncRing, terms: dict[tuple[int, ...], int]) -> "TruncatedPoly":
        acc: dict[int, int] = {}
        for mono, c in terms.items():
            if any(not 0 <= s < R.m for s in mono):
                raise ValueError(f"symbol out of range in {mono}")
            if not R.allowed(mono):
                continue
            i = R.index(mono)
            acc[i] = (acc.get(i, 0) + c) % R.p
        items = sorted((i, c) for i, c in acc.items() if c)
        return cls(R, [i for i, _ in items], [c for _, c in items])

    @classmethod
    def unit_gen(cls, R: TruncRing, j: int) -> "TruncatedPoly":
        """``1 + e_j``."""
        if R.k == 1:
            return cls.one(R)
        return cls.from_terms(R, {(): 1, (j,): 1})

    # inspection -------------------------------------------------------------

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        return [(self.ring.monomial(int(i)), int(c)) for i, c in zip(self.idx, self.coef)]

    def constant(self) -> int:
        return int(self.coef[0]) if self.idx.size and self.idx[0] == 0 else 0

    def is_one(self) -> bool:
        return self.idx.size == 1 and self.idx[0] == 0 and self.coef[0] == 1

    def min_degree(self) -> int | None:
        """Least degree of a nonconstant term, or ``None`` if there is none."""
        for i in self.idx:
            if i != 0:
                return int(np.searchsorted(self.ring.off, i, side="right")) - 1
        return None

    def __len__(self):
        return int(self.idx.size)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedPoly)
            and self.ring == other.ring
            and np.array_equal(self.idx, other.idx)
            and np.array_equal(self.coef, other.coef)
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring._key, self.idx.tobytes(), self.coef.tobytes()))
        return self._hash

    def sort_key(self):
        return (len(self.idx), tuple(self.idx.tolist()), tuple(self.coef.tolist()))

    # arithmetic ---------------------------------------------------------------

    def __mul__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        R = self.ring
        if other.ring != R:
            raise TypeError("polynomials live in different rings")
        i, c = _kernels.poly_mul(
            self.idx, self.coef, other.idx, other.coef, R.off, R.pw, R.m, R.k, R.q or 0, R.p
        )
        return TruncatedPoly(R, i, c)

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        acc = dict(zip(self.idx.tolist(), self.coef.tolist()))
        for i, c in zip(other.idx.tolist(), other.coef.tolist()):
            acc[i] = (acc.get(i, 0) + c) % self.ring.p
        items = sorted((i, c) for i, c in acc.items() if c)
        return TruncatedPoly(self.ring, [i for i, _ in items], [c for _, c in items])

    def scale(self, s: int) -> "TruncatedPoly":
        c = (self.coef * s) % self.ring.p
        nz = c != 0
        return TruncatedPoly(self.ring, self.idx[nz], c[nz])

    def augmentation_part(self) -> "TruncatedPoly":
        keep = self.idx != 0
        return TruncatedPoly(self.ring, self.idx[keep], self.coef[keep])

    def inv(self) -> "TruncatedPoly":
        """Inverse of a unit ``1 + n`` as the finite series ``1 - n + n^2 - ...``."""
        if self.constant() != 1:
            raise ValueError("only polynomials with constant term 1 are inverted")
        neg_n = self.augmentation_part().scale(self.ring.p - 1)
        one = TruncatedPoly.one(self.ring)
        total, term = one, one
        for _ in range(self.ring.k):
            term = term * neg_n
            if not term.idx.size:
                break
            total = total + term
        return total

    def __pow__(self, e: int) -> "TruncatedPoly":
        if e < 0:
            return self.inv() ** (-e)
        result = TruncatedPoly.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # text -----------------------------------------------------------------------

    def format(self) -> str:
        if not self.idx.size:
            return "0"
        parts = []
        for mono, c in self.terms():
            sym = "*".join(f"e{s + 1}" for s in mono)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(sym)
            else:
                parts.append(f"{c}*{sym}")
        return "+".join(parts)

    @classmethod
    def parse(cls, R: TruncRing, text: str) -> "TruncatedPoly":
        text = text.strip()
        if text == "0":
            return cls(R, [], [])
        terms: dict[tuple[int, ...], int] = {}
        for raw in text.split("+"):
            toks = [t.strip() for t in raw.split("*")]
            if not toks or not toks[0]:
                raise ValueError(f"empty term in polynomial {text!r}")
            c = 1
            if toks[0].isdigit():
                c = int(toks[0])
                toks = toks[1:]
            mono = []
            for t in toks:
                if not (t.startswith("e") and t[1:].isdigit()):
                    raise ValueError(f"bad symbol {t!r} in polynomial")
                mono.append(int(t[1:]) - 1)
            mono_t = tuple(mono)
            if mono_t in terms:
                raise ValueError(f"repeated monomial in {text!r}")
            if not R.allowed(mono_t):
                raise ValueError(f"monomial {t!r} vanishes in {R}")
            terms[mono_t] = c
        out = cls.from_terms(R, terms)
        if out.format() != text:
            raise ValueError(f"non-canonical polynomial literal {text!r}")
        return out

    def __repr__(self):
        return f"TruncatedPoly({self.format()})"
