"""Kernels of exponent maps ``F -> Z/M``: Schreier bases, rewriting, and the
cover basis that contains the surface relator and its conjugates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import PreconditionError
from .words import Alphabet, Word, commutator, gamma

__all__ = [
    "ExponentHom",
    "SchreierBasis",
    "CoverBasis",
    "schreier_generators",
    "rewrite_in_Y",
    "choose_decreasing_i",
    "cover_basis",
    "rewrite_over_Z",
    "nielsen_reduce",
    "stallings_graph",
]


@dataclass(frozen=True)
class ExponentHom:
    """``mu: F -> Z/modulus`` with ``mu(designated) = 1``."""

    values: tuple[int, ...]
    designated: int
    modulus: int

    def __post_init__(self):
        vals = tuple(v % self.modulus for v in self.values)
        object.__setattr__(self, "values", vals)
        if vals[self.designated] != 1:
            raise ValueError("designated generator must map to 1")

    @property
    def rank(self) -> int:
        return len(self.values)

    def __call__(self, w: Word) -> int:
        s = 0
        for a in w.letters:
            s += self.values[a - 1] if a > 0 else -self.values[-a - 1]
        return s % self.modulus


@dataclass(frozen=True)
class SchreierBasis:
    """Free basis ``d(y, i) = x^i y x^-((i + mu(y)) mod M)`` and ``X = x^M`` of ``Ker mu``."""

    mu: ExponentHom
    alphabet: Alphabet
    words: tuple[Word, ...]
    _slot: dict = field(repr=False, compare=False, hash=False)

    @property
    def rank(self) -> int:
        return len(self.words)

    def symbol(self, y: int, i: int) -> int:
        """Index of ``d(y, i)`` in the basis."""
        return self._slot[(y, i)]

    @property
    def big_x(self) -> int:
        return self._slot["X"]

    def evaluate(self, w: Word) -> Word:
        """Map a word over the basis back into ``F``."""
        return w.substitute(self.words)


def schreier_generators(mu: ExponentHom, names: Alphabet | None = None) -> SchreierBasis:
    names = names or Alphabet.standard(mu.rank)
    M, x = mu.modulus, mu.designated
    xw = Word.gen(x)
    words, labels, slot = [], [], {}
    for y in range(mu.rank):
        if y == x:
            continue
        yw = Word.gen(y)
        for i in range(M):
            slot[(y, i)] = len(words)
            words.append(xw**i * yw * xw ** (-((i + mu.values[y]) % M)))
            labels.append(f"{names.names[y]}~{i}")
    slot["X"] = len(words)
    words.append(xw**M)
    labels.append(f"{names.names[x]}~{M}")
    return SchreierBasis(mu, Alphabet(tuple(labels)), tuple(words), slot)


def rewrite_in_Y(f: Word, i: int, basis: SchreierBasis) -> Word:
    """``x^i f x^-i`` (``i`` taken mod the modulus) as a word over the Schreier basis."""
    mu = basis.mu
    if mu(f) != 0:
        raise PreconditionError("word is not in the kernel")
    M, x = mu.modulus, mu.designated + 1
    c = i % M
    out = []
    for a in f.letters:
        if abs(a) == x:
            if a > 0:
                if c == M - 1:
                    out.append(basis.big_x + 1)
                c = (c + 1) % M
            else:
                if c == 0:
                    out.append(-(basis.big_x + 1))
                c = (c - 1) % M
        elif a > 0:
            out.append(basis.symbol(a - 1, c) + 1)
            c = (c + mu.values[a - 1]) % M
        else:
            c = (c - mu.values[-a - 1]) % M
            out.append(-(basis.symbol(-a - 1, c) + 1))
    return Word(out)


def choose_decreasing_i(g: Word, basis: SchreierBasis) -> int:
    """Residue ``i`` minimizing ``|g_i|``; it is strictly shorter than ``g``."""
    x = basis.mu.designated
    if x not in g.support():
        raise PreconditionError("designated generator not in the support")
    best = min(range(basis.mu.modulus), key=lambda i: (len(rewrite_in_Y(g, i, basis)), i))
    if len(rewrite_in_Y(g, best, basis)) >= len(g):
        raise AssertionError("no strictly decreasing residue found")
    return best


# -- cover basis ---------------------------------------------------------------


@dataclass(frozen=True)
class CoverBasis:
    """Free basis ``Z`` of ``Ker mu`` (``mu(x1) = 1`` mod ``p^2``) containing ``gamma``.

    ``Z`` consists of ``z_l = x1^l gamma x1^-l`` for ``l != k0``, ``X = x1^M``,
    ``b0 = y1`` and the conjugates ``x1^l t x1^-l`` of the remaining generators.
    """

    n: int
    p: int
    mu: ExponentHom
    schreier: SchreierBasis
    alphabet: Alphabet
    words: tuple[Word, ...]
    k0: int
    z_index: dict
    y_to_z: tuple[Word, ...]

    @property
    def modulus(self) -> int:
        return self.mu.modulus

    @property
    def rank(self) -> int:
        return len(self.words)

    def z(self, l: int) -> int:
        """Basis index of ``z_l`` (``l != k0``)."""
        return self.z_index[l]

    def evaluate(self, w: Word) -> Word:
        return w.substitute(self.words)

    @cached_property
    def gamma_symbol(self) -> Word:
        return Word.gen(self.z(0))


def _conj_power(w: Word, x: Word, l: int) -> Word:
    return x**l * w * x ** (-l)


def cover_basis(n: int, p: int, k0: int | None = None, names: Alphabet | None = None,
                l0: int = 0) -> CoverBasis:
    """Cover basis for ``F(x1, y1, ..., xn, yn)``; ``k0`` defaults to the least value
    outside ``{0, l0}``."""
    M = p * p
    rank = 2 * n
    names = names or Alphabet(tuple(n_ for j in range(1, n + 1) for n_ in (f"x{j}", f"y{j}")))
    if names.rank != rank:
        raise ValueError("alphabet rank must be 2n")
    if k0 is None:
        k0 = next(k for k in range(1, M) if k != l0 % M)
    if not 0 < k0 < M or k0 == l0 % M:
        raise ValueError("k0 must avoid 0 and l0")
    mu = ExponentHom(tuple(1 if i == 0 else 0 for i in range(rank)), 0, M)
    sb = schreier_generators(mu, names)
    x1 = Word.gen(0)
    g = gamma(n)

    # basis symbols and their defining words in F
    labels, words, z_index = [], [], {}
    for l in range(M):
        if l == k0:
            continue
        z_index[l] = len(words)
        labels.append(f"z{l}")
        words.append(_conj_power(g, x1, l))
    z_index["X"] = len(words)
    labels.append("X")
    words.append(x1**M)
    z_index["b0"] = len(words)
    labels.append("b0")
    words.append(Word.gen(1))
    for t in range(2, rank):
        for l in range(M):
            z_index[(t, l)] = len(words)
            labels.append(f"{names.names[t]}~{l}")
            words.append(_conj_power(Word.gen(t), x1, l))
    Z = Alphabet(tuple(labels))

    def sym(key) -> Word:
        return Word.gen(z_index[key])

    def c_word(l: int) -> Word:
        w = Word()
        for j in range(1, n):
            w = w * commutator(sym((2 * j, l)), sym((2 * j + 1, l)))
        return w

    # b_l = x1^l y1 x1^-l over Z, from z_l = b_{l-1}^-1 b_l c_l and
    # z_0 = X^-1 b_{M-1}^-1 X b_0 c_0
    b = [None] * M
    b[0] = sym("b0")
    for l in range(1, k0):
        b[l] = b[l - 1] * sym(l) * c_word(l).inv()
    X = sym("X")
    b[M - 1] = X * b[0] * c_word(0) * sym(0).inv() * X.inv()
    for l in range(M - 1, k0, -1):
        b[l - 1] = b[l] * c_word(l) * sym(l).inv()

    y_to_z = [None] * sb.rank
    for t in range(1, rank):
        for l in range(M):
            y_to_z[sb.symbol(t, l)] = b[l] if t == 1 else sym((t, l))
    y_to_z[sb.big_x] = X
    cb = CoverBasis(n, p, mu, sb, Z, tuple(words), k0, z_index, tuple(y_to_z))
    for idx, w in enumerate(cb.y_to_z):
        if cb.evaluate(w) != sb.words[idx]:
            raise AssertionError("cover basis substitution is inconsistent")
    return cb


def rewrite_over_Z(f: Word, basis: CoverBasis) -> Word:
    """``f`` in ``Ker mu`` as a reduced word over the cover basis."""
    return rewrite_in_Y(f, 0, basis.schreier).substitute(basis.y_to_z)


# -- basis checks -----------------------------------------------------------------


def nielsen_reduce(words: list[Word], max_rounds: int = 10_000) -> list[Word]:
    """Apply length-reducing Nielsen moves ``u -> u v^+-1``, ``v^+-1 u`` until none applies.

    Empty words are dropped.  A free basis never loses an element here.
    """
    ws = [w for w in words if w]
    for _ in range(max_rounds):
        changed = False
        for i in range(len(ws)):
            for j in range(len(ws)):
                if i == j:
                    continue
                v = ws[j]
                for cand in (ws[i] * v, ws[i] * v.inv(), v * ws[i], v.inv() * ws[i]):
                    if len(cand) < len(ws[i]):
                        ws[i] = cand
                        changed = True
                        break
        ws = [w for w in ws if w]
        if not changed:
            return ws
    raise AssertionError("Nielsen reduction did not settle")


@dataclass
class FoldedGraph:
    vertices: int
    edges: int
    complete: bool

    @property
    def rank(self) -> int:
        return self.edges - self.vertices + 1

    @property
    def index(self) -> int | None:
        return self.vertices if self.complete else None


def stallings_graph(words: list[Word], rank: int) -> FoldedGraph:
    """Fold the bouquet of ``words`` and report the rank and (if finite) index of the subgroup."""
    parent: list[int] = [0]
    adj: list[dict[int, set[int]]] = [{}]

    def new() -> int:
        parent.append(len(parent))
        adj.append({})
        return len(parent) - 1

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def link(u: int, a: int, v: int) -> None:
        adj[u].setdefault(a, set()).add(v)
        adj[v].setdefault(-a, set()).add(u)

    for w in words:
        if not w:
            continue
        cur = 0
        for pos, a in enumerate(w.letters):
            nxt = 0 if pos == len(w) - 1 else new()
            link(cur, a, nxt)
            cur = nxt

    changed = True
    while changed:
        changed = False
        for v in range(len(parent)):
            if find(v) != v:
                continue
            for a in list(adj[v]):
                targets = {find(t) for t in adj[v][a]}
                adj[v][a] = targets
                if len(targets) > 1:
                    keep, *rest = sorted(targets)
                    for r in rest:
                        parent[r] = keep
                        for lab, ts in adj[r].items():
                            adj[keep].setdefault(lab, set()).update(ts)
                        adj[r] = {}
                    changed = True
                    break
    roots = [v for v in range(len(parent)) if find(v) == v]
    edges = 0
    complete = True
    for v in roots:
        labels = {a: {find(t) for t in ts} for a, ts in adj[v].items() if ts}
        edges += sum(len(ts) for a, ts in labels.items() if a > 0)
        if len(labels) != 2 * rank:
            complete = False
    return FoldedGraph(len(roots), edges, complete)
