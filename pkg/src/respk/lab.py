"""Brute-force checks of the lower p-central series and automorphism filtrations
on small finite groups given by multiplication tables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Sequence

import numpy as np

from . import _kernels
from .errors import CapExceeded

__all__ = [
    "TableGroup",
    "cyclic",
    "dihedral",
    "quaternion",
    "elementary_abelian",
    "direct_product",
    "symmetric",
    "group_by_name",
    "lower_p_series",
    "check_commutator_containment",
    "aut_group",
    "inn_subgroup",
    "ip_kernel",
    "an_filtration_checks",
    "bn_filtration_checks",
    "graded_bracket_check",
    "LabReport",
    "quotients_are_p_groups",
    "DEFAULT_ORDER_CAP",
    "DEFAULT_AUT_CAP",
]

DEFAULT_ORDER_CAP = 64
DEFAULT_AUT_CAP = 32


class TableGroup:
    """Finite group on ``0..order-1`` with identity ``0``."""

    def __init__(self, table: np.ndarray, gens: Sequence[int], name: str = "G", labels: Sequence | None = None):
        self.table = np.ascontiguousarray(table, dtype=np.int64)
        self.order = n = self.table.shape[0]
        self.gens = tuple(int(g) for g in gens)
        self.name = name
        self.labels = list(labels) if labels is not None else list(range(n))
        if not np.array_equal(self.table[0], np.arange(n)) or not np.array_equal(self.table[:, 0], np.arange(n)):
            raise ValueError("index 0 must be the identity")
        inv = np.argmax(self.table == 0, axis=1)
        if not np.all(self.table[np.arange(n), inv] == 0):
            raise ValueError("missing inverses")
        self.inverse = inv
        self._check_associative()
        if not self.subgroup(self.gens) == frozenset(range(n)):
            raise ValueError("generators do not generate the group")

    def _check_associative(self, samples: int = 4096) -> None:
        T, n = self.table, self.order
        if n <= 64:
            left = T[T[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
            right = T[np.arange(n)[:, None, None], T[None, :, :]]  # a(bc)
            if not np.array_equal(left, right):
                raise ValueError("table is not associative")
            return
        rng = random.Random(0)
        for _ in range(samples):
            a, b, c = (rng.randrange(n) for _ in range(3))
            if T[T[a, b], c] != T[a, T[b, c]]:
                raise ValueError("table is not associative")

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def elem_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def subgroup(self, gens) -> frozenset[int]:
        gens = sorted(set(int(g) for g in gens))
        member = _kernels.closure(self.table, gens)
        return frozenset(np.flatnonzero(member).tolist())

    def is_normal(self, H: frozenset[int]) -> bool:
        return all(self.mul(self.mul(g, h), self.inv(g)) in H for g in self.gens for h in H)

    def coset_key(self, x: int, N: frozenset[int]) -> int:
        """Least element of ``x N``."""
        return min(self.mul(x, n) for n in N)

    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    def __repr__(self):
        return f"TableGroup({self.name}, order={self.order})"


def table_group(elements_from: Sequence[Hashable], mul: Callable, identity: Hashable, name: str,
                cap: int = DEFAULT_ORDER_CAP) -> TableGroup:
    """Close ``elements_from`` under ``mul`` and tabulate; generators are the given elements."""
    elems = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in elements_from:
                y = mul(x, s)
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
                    if len(elems) > cap:
                        raise CapExceeded("group order", cap)
        frontier = nxt
    n = len(elems)
    table = np.empty((n, n), np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[mul(a, b)]
    return TableGroup(table, [index[s] for s in elements_from], name, elems)


def cyclic(n: int) -> TableGroup:
    return table_group([1 % n], lambda a, b: (a + b) % n, 0, f"C{n}")


def dihedral(order: int) -> TableGroup:
    """Symmetries of the ``order/2``-gon as pairs ``(rotation, flip)``."""
    m = order // 2

    def mul(a, b):
        r1, f1 = a
        r2, f2 = b
        return ((r1 + (-r2 if f1 else r2)) % m, f1 ^ f2)

    return table_group([(1, 0), (0, 1)], mul, (0, 0), f"D{order}")


def quaternion() -> TableGroup:
    """Q8 as signed unit quaternions ``(sign, unit)`` with units 1, i, j, k."""
    prod_table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(a, b):
        s, u = prod_table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return table_group([(1, 1), (1, 2)], mul, (1, 0), "Q8")


def elementary_abelian(p: int, r: int) -> TableGroup:
    gens = [tuple(int(i == j) for i in range(r)) for j in range(r)]
    return table_group(gens, lambda a, b: tuple((x + y) % p for x, y in zip(a, b)), (0,) * r, f"E{p}^{r}")


def symmetric(n: int) -> TableGroup:
    """Permutations of ``range(n)``; ``(a*b)(i) = a(b(i))``."""
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return table_group(gens, lambda a, b: tuple(a[i] for i in b), tuple(range(n)), f"S{n}")


def direct_product(G: TableGroup, H: TableGroup) -> TableGroup:
    pairs = [(g, 0) for g in G.gens] + [(0, h) for h in H.gens]
    return table_group(pairs, lambda a, b: (G.mul(a[0], b[0]), H.mul(a[1], b[1])), (0, 0), f"{G.name}x{H.name}")


def group_by_name(name: str) -> TableGroup:
    """``C<n>``, ``D<2m>``, ``Q8``, ``S<n>``, ``E<p>^<r>`` and ``x``-separated products."""
    parts = name.split("x")
    if len(parts) > 1:
        G = group_by_name(parts[0])
        for part in parts[1:]:
            G = direct_product(G, group_by_name(part))
        return G
    try:
        if name == "Q8":
            return quaternion()
        kind, rest = name[0], name[1:]
        if kind == "C":
            return cyclic(int(rest))
        if kind == "D":
            return dihedral(int(rest))
        if kind == "S":
            return symmetric(int(rest))
        if kind == "E":
            p, r = rest.split("^")
            return elementary_abelian(int(p), int(r))
    except ValueError:
        pass
    raise ValueError(f"unknown group name {name!r}")


# -- lower p-central series --------------------------------------------------------------


def lower_p_series(G: TableGroup, p: int) -> list[frozenset[int]]:
    """``lambda_1 = G`` and ``lambda_{n+1} = <[g, a], a^p : g in G, a in lambda_n>`` until stable."""
    chain = [frozenset(range(G.order))]
    while True:
        cur = chain[-1]
        gens = {G.commutator(g, a) for g in range(G.order) for a in cur}
        gens |= {G.power(a, p) for a in cur}
        nxt = G.subgroup(gens)
        if nxt == cur:
            return chain
        chain.append(nxt)


def _term(chain: list[frozenset[int]], n: int) -> frozenset[int]:
    """``lambda_n`` (1-based), extended by the stable value."""
    return chain[min(n, len(chain)) - 1]


def check_commutator_containment(G: TableGroup, p: int, bound: int) -> bool:
    """``[lambda_m, lambda_n] <= lambda_{m+n}`` for all ``m + n <= bound``."""
    chain = lower_p_series(G, p)
    for m in range(1, bound):
        for n in range(1, bound - m + 1):
            target = _term(chain, m + n)
            if any(G.commutator(a, b) not in target for a in _term(chain, m) for b in _term(chain, n)):
                return False
    return True


# -- automorphisms ---------------------------------------------------------------------


def _extend(G: TableGroup, images: Sequence[int]) -> tuple[int, ...] | None:
    """The homomorphism sending ``G.gens`` to ``images`` as a tuple, if it exists and is bijective."""
    phi = [-1] * G.order
    phi[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in zip(G.gens, images):
                y, v = G.mul(x, s), G.mul(phi[x], t)
                if phi[y] == -1:
                    phi[y] = v
                    nxt.append(y)
                elif phi[y] != v:
                    return None
        frontier = nxt
    if len(set(phi)) != G.order:
        return None
    T = G.table
    arr = np.array(phi)
    if not np.array_equal(arr[T], T[arr[:, None], arr[None, :]]):
        return None
    return tuple(phi)


def aut_group(G: TableGroup, cap: int = DEFAULT_AUT_CAP) -> list[tuple[int, ...]]:
    """All automorphisms as permutation tuples, identity first."""
    if G.order > cap:
        raise CapExceeded("automorphism search group order", cap)
    orders = [G.elem_order(x) for x in range(G.order)]
    choices = [[x for x in range(G.order) if orders[x] == orders[s]] for s in G.gens]
    out = set()
    for imgs in product(*choices):
        phi = _extend(G, imgs)
        if phi is not None:
            out.add(phi)
    ident = tuple(range(G.order))
    return [ident] + sorted(out - {ident})


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """``a o b``: first ``b`` then ``a``."""
    return tuple(a[x] for x in b)


def inn_subgroup(G: TableGroup) -> list[tuple[int, ...]]:
    maps = {tuple(G.mul(G.mul(g, x), G.inv(g)) for x in range(G.order)) for g in range(G.order)}
    return sorted(maps)


def _acts_trivially_mod(G: TableGroup, alpha, N: frozenset[int], on=None) -> bool:
    on = range(G.order) if on is None else on
    return all(G.mul(G.inv(x), alpha[x]) in N for x in on)


def ip_kernel(G: TableGroup, p: int, cap: int = DEFAULT_AUT_CAP) -> list[tuple[int, ...]]:
    """Automorphisms acting trivially on ``G / lambda_2``."""
    lam2 = _term(lower_p_series(G, p), 2)
    return [a for a in aut_group(G, cap) if _acts_trivially_mod(G, a, lam2)]


# -- filtrations of the automorphism group -------------------------------------------------


@dataclass
class LabReport:
    group: str
    p: int
    values: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v for k, v in self.values.items() if isinstance(v, bool))

    def lines(self) -> list[str]:
        out = [f"group: {self.group}", f"p: {self.p}"]
        out += [f"{k}: {str(v).lower() if isinstance(v, bool) else v}" for k, v in self.values.items()]
        out.append(f"ok: {str(self.ok).lower()}")
        return out


def _a_terms(G, p, depth, cap):
    chain = lower_p_series(G, p)
    auts = aut_group(G, cap)
    A = {n: [a for a in auts if _acts_trivially_mod(G, a, _term(chain, n + 1))] for n in range(1, depth + 2)}
    return chain, auts, A


def an_filtration_checks(G: TableGroup, p: int, depth: int = 3, cap: int = DEFAULT_AUT_CAP) -> LabReport:
    """Checks on ``A_n = Ker(Aut G -> Aut(G / lambda_{n+1}))`` for ``n <= depth``.

    * ``A_n`` acts trivially on ``lambda_k / lambda_{n+k}``;
    * ``u_a: [g] -> [g^-1 a(g)]`` from ``G / lambda_2`` to ``lambda_{n+1} / lambda_{n+2}`` is
      independent of the representative;
    * ``u_{a b} = u_a u_b`` on all pairs, and ``{a : u_a = 1} = A_{n+1}``.
    """
    chain, auts, A = _a_terms(G, p, depth, cap)
    rep = LabReport(G.name, p)
    lam2 = _term(chain, 2)
    rep.values["aut_order"] = len(auts)
    acts = well = hom = kernel = True
    for n in range(1, depth + 1):
        rep.values[f"A{n}_order"] = len(A[n])
        for a in A[n]:
            for k in range(1, depth + 1):
                acts &= _acts_trivially_mod(G, a, _term(chain, n + k), _term(chain, k))
        top, low = _term(chain, n + 1), _term(chain, n + 2)

        def u(a, g):
            return G.coset_key(G.mul(G.inv(g), a[g]), low)

        for a in A[n]:
            for g in range(G.order):
                val = u(a, g)
                if G.mul(G.inv(g), a[g]) not in top:
                    well = False
                if any(u(a, G.mul(g, c)) != val for c in lam2):
                    well = False
        for a, b in product(A[n], repeat=2):
            ab = _compose(a, b)
            for g in range(G.order):
                lhs = u(ab, g)
                rhs = G.coset_key(G.mul(G.mul(G.inv(g), a[g]), G.mul(G.inv(g), b[g])), low)
                if lhs != rhs:
                    hom = False
        ker = sorted(a for a in A[n] if all(u(a, g) == G.coset_key(0, low) for g in range(G.order)))
        kernel &= ker == sorted(A[n + 1])
    rep.values["acts_trivially"] = acts
    rep.values["u_well_defined"] = well
    rep.values["u_homomorphism"] = hom
    rep.values["u_kernel"] = kernel
    return rep


def _preserves_classes(G: TableGroup, a, N: frozenset[int]) -> bool:
    for x in range(G.order):
        target = G.coset_key(a[x], N)
        if all(G.coset_key(G.mul(G.mul(g, x), G.inv(g)), N) != target for g in range(G.order)):
            return False
    return True


def bn_filtration_checks(G: TableGroup, p: int, depth: int = 3, cap: int = DEFAULT_AUT_CAP) -> LabReport:
    """``B_n``: maps in ``I_p(G)`` fixing every conjugacy class of ``G / lambda_{n+1}``."""
    chain = lower_p_series(G, p)
    lam2 = _term(chain, 2)
    ip = [a for a in aut_group(G, cap) if _acts_trivially_mod(G, a, lam2)]
    inn = set(inn_subgroup(G))
    rep = LabReport(G.name, p)
    inter = set(ip)
    contained = True
    for n in range(1, depth + 1):
        B = {a for a in ip if _preserves_classes(G, a, _term(chain, n + 1))}
        rep.values[f"B{n}_order"] = len(B)
        contained &= inn <= B
        inter &= B
    rep.values["inn_order"] = len(inn)
    rep.values["inn_in_all_Bn"] = contained
    rep.values["intersection_order"] = len(inter)
    rep.values["intersection_minus_inn"] = len(inter - inn)
    return rep


def graded_bracket_check(G: TableGroup, p: int) -> bool:
    """The commutator induces a well-defined, bilinear bracket on ``lambda_m / lambda_{m+1}``."""
    chain = lower_p_series(G, p)
    L = len(chain)
    for m in range(1, L):
        for n in range(1, L - m + 1):
            A, B = _term(chain, m), _term(chain, n)
            Am, Bn = _term(chain, m + 1), _term(chain, n + 1)
            out = _term(chain, m + n + 1)

            def br(a, b):
                return G.coset_key(G.commutator(a, b), out)

            for a in A:
                for b in B:
                    v = br(a, b)
                    if any(br(G.mul(a, c), b) != v for c in Am) or any(br(a, G.mul(b, c)) != v for c in Bn):
                        return False
            for a, a2 in product(A, repeat=2):
                for b in B:
                    lhs = br(G.mul(a, a2), b)
                    rhs = G.coset_key(G.mul(G.commutator(a, b), G.commutator(a2, b)), out)
                    if lhs != rhs:
                        return False
    if G.is_abelian() and any(G.commutator(a, b) for a in range(G.order) for b in range(G.order)):
        return False
    return True


def is_p_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


def quotients_are_p_groups(G: TableGroup, p: int) -> bool:
    return all(is_p_power(G.order // len(N), p) for N in lower_p_series(G, p))
