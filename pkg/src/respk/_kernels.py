"""Hot inner loops: truncated polynomial products and table-group closure.

Each kernel has a numba implementation and a pure-numpy one.  Setting
``RESPK_DISABLE_NUMBA=1`` (or running without numba installed) selects numpy.
Both paths return identical arrays; ``tests/test_kernels.py`` checks that.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["BACKEND", "poly_mul", "poly_mul_numpy", "closure", "closure_numpy"]

_DISABLED = os.environ.get("RESPK_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba
except ImportError:  # pragma: no cover - depends on environment
    numba = None

BACKEND = "numba" if numba is not None else "numpy"


# -- monomial decoding -------------------------------------------------------
#
# A monomial of degree d in m symbols is stored as off[d] + v, where v is the
# base-m number spelled by its symbols (most significant first).


def _decode_numpy(idx, off, pw, m):
    deg = np.searchsorted(off, idx, side="right") - 1
    val = idx - off[deg]
    first = np.where(deg > 0, val // pw[np.maximum(deg - 1, 0)], -1)
    last = np.where(deg > 0, val % m, -1)
    lead = np.zeros_like(deg)
    trail = np.zeros_like(deg)
    if m == 1:
        return deg, val, first, last, deg.copy(), deg.copy()
    for t in range(int(deg.max(initial=0))):
        live = deg > t
        digit_hi = (val // pw[np.maximum(deg - 1 - t, 0)]) % m
        lead += live & (lead == t) & (digit_hi == first)
        digit_lo = (val // pw[t]) % m
        trail += live & (trail == t) & (digit_lo == last)
    return deg, val, first, last, lead, trail


def poly_mul_numpy(ai, ac, bi, bc, off, pw, m, k, q, p):
    da, va, _, la, _, ta = _decode_numpy(ai, off, pw, m)
    db, vb, fb, _, lb, _ = _decode_numpy(bi, off, pw, m)
    d = da[:, None] + db[None, :]
    keep = d < k
    if q > 0:
        clash = (da[:, None] > 0) & (db[None, :] > 0) & (la[:, None] == fb[None, :])
        keep &= ~(clash & (ta[:, None] + lb[None, :] >= q))
    ii, jj = np.nonzero(keep)
    if ii.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    dd = d[ii, jj]
    idx = off[dd] + va[ii] * pw[db[jj]] + vb[jj]
    cf = (ac[ii] * bc[jj]) % p
    uniq, inv = np.unique(idx, return_inverse=True)
    sums = np.zeros(uniq.size, np.int64)
    np.add.at(sums, inv, cf)
    sums %= p
    nz = sums != 0
    return uniq[nz].astype(np.int64), sums[nz]


def closure_numpy(table, gens):
    n = table.shape[0]
    member = np.zeros(n, np.bool_)
    member[0] = True
    frontier = np.array([0], np.int64)
    gens = np.asarray(gens, np.int64)
    while frontier.size:
        nxt = np.unique(table[frontier][:, gens].ravel()) if gens.size else np.empty(0, np.int64)
        nxt = nxt[~member[nxt]]
        member[nxt] = True
        frontier = nxt
    return member


if numba is not None:

    @numba.njit(cache=True)
    def _decode_nb(idx, off, pw, m):
        n = idx.size
        deg = np.empty(n, np.int64)
        val = np.empty(n, np.int64)
        first = np.full(n, -1, np.int64)
        last = np.full(n, -1, np.int64)
        lead = np.zeros(n, np.int64)
        trail = np.zeros(n, np.int64)
        for t in range(n):
            x = idx[t]
            d = 0
            while d + 1 < off.size and off[d + 1] <= x:
                d += 1
            v = x - off[d]
            deg[t] = d
            val[t] = v
            if d == 0:
                continue
            if m == 1:
                first[t] = 0
                last[t] = 0
                lead[t] = d
                trail[t] = d
                continue
            f = v // pw[d - 1]
            first[t] = f
            r = 1
            while r < d and (v // pw[d - 1 - r]) % m == f:
                r += 1
            lead[t] = r
            s = v % m
            last[t] = s
            r = 1
            while r < d and (v // pw[r]) % m == s:
                r += 1
            trail[t] = r
        return deg, val, first, last, lead, trail

    @numba.njit(cache=True)
    def _poly_mul_nb(ai, ac, bi, bc, off, pw, m, k, q, p):
        da, va, fa, la, lda, ta = _decode_nb(ai, off, pw, m)
        db, vb, fb, lbb, lb, tb = _decode_nb(bi, off, pw, m)
        cap = 0
        for i in range(ai.size):
            for j in range(bi.size):
                if da[i] + db[j] >= k:
                    break
                cap += 1
        out_i = np.empty(cap, np.int64)
        out_c = np.empty(cap, np.int64)
        n = 0
        for i in range(ai.size):
            for j in range(bi.size):
                d = da[i] + db[j]
                if d >= k:
                    break
                if q > 0 and da[i] > 0 and db[j] > 0 and la[i] == fb[j] and ta[i] + lb[j] >= q:
                    continue
                out_i[n] = off[d] + va[i] * pw[db[j]] + vb[j]
                out_c[n] = (ac[i] * bc[j]) % p
                n += 1
        out_i = out_i[:n]
        out_c = out_c[:n]
        order = np.argsort(out_i, kind="mergesort")
        res_i = np.empty(n, np.int64)
        res_c = np.empty(n, np.int64)
        r = 0
        t = 0
        while t < n:
            key = out_i[order[t]]
            s = 0
            while t < n and out_i[order[t]] == key:
                s += out_c[order[t]]
                t += 1
            s %= p
            if s != 0:
                res_i[r] = key
                res_c[r] = s
                r += 1
        return res_i[:r], res_c[:r]

    @numba.njit(cache=True)
    def _closure_nb(table, gens):
        n = table.shape[0]
        member = np.zeros(n, np.bool_)
        queue = np.empty(n, np.int64)
        member[0] = True
        queue[0] = 0
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            for s in gens:
                y = table[x, s]
                if not member[y]:
                    member[y] = True
                    queue[tail] = y
                    tail += 1
        return member

    def poly_mul(ai, ac, bi, bc, off, pw, m, k, q, p):
        return _poly_mul_nb(ai, ac, bi, bc, off, pw, m, k, q, p)

    def closure(table, gens):
        return _closure_nb(np.ascontiguousarray(table, np.int64), np.asarray(gens, np.int64))

else:  # pragma: no cover - exercised with RESPK_DISABLE_NUMBA=1
    poly_mul = poly_mul_numpy
    closure = closure_numpy
