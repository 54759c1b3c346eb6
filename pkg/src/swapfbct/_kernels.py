"""Compiled inner loops.  All kernels release the GIL and write disjoint rows."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _derivative(f, add, neg, char2, a, out):
    # out[x] = f(x + a) - f(x)
    q = f.shape[0]
    if char2:
        for x in range(q):
            out[x] = f[x ^ a] ^ f[x]
    else:
        for x in range(q):
            out[x] = add[f[add[x, a]], neg[f[x]]]


@njit(cache=True, nogil=True)
def fbct_entries_direct(f, add, neg, char2, rows, reduced, out):
    """Count x with f(x+a+b) - f(x+a) - f(x+b) + f(x) = 0, entry by entry.

    Uses D_a(x) = f(x+a) - f(x): the entry is #{x : D_a(x+b) = D_a(x)}.
    With ``reduced`` only one representative (a, b) per symmetry orbit is
    filled; the caller expands the orbits.
    """
    q = f.shape[0]
    d = np.empty(q, dtype=np.int64)
    for a in rows:
        _derivative(f, add, neg, char2, a, d)
        for b in range(q):
            if reduced:
                if char2:
                    if not (a <= b and b <= (a ^ b)):
                        continue
                else:
                    if not (a <= neg[a] and b <= neg[b] and a <= b):
                        continue
            c = 0
            if char2:
                for x in range(q):
                    if d[x ^ b] == d[x]:
                        c += 1
            else:
                for x in range(q):
                    if d[add[x, b]] == d[x]:
                        c += 1
            out[a, b] = c


@njit(cache=True, nogil=True)
def _pairs_row(f, add, neg, char2, a, d, count, start, order, row):
    q = f.shape[0]
    _derivative(f, add, neg, char2, a, d)
    count[:] = 0
    for x in range(q):
        count[d[x]] += 1
    start[0] = 0
    for v in range(q):
        start[v + 1] = start[v] + count[v]
    count[:] = 0
    for x in range(q):
        v = d[x]
        order[start[v] + count[v]] = x
        count[v] += 1
    row[:] = 0
    for v in range(q):
        lo = start[v]
        hi = start[v + 1]
        for i in range(lo, hi):
            xi = order[i]
            for j in range(lo, hi):
                xj = order[j]
                if char2:
                    row[xj ^ xi] += 1
                else:
                    row[add[xj, neg[xi]]] += 1


@njit(cache=True, nogil=True)
def fbct_rows_pairs(f, add, neg, char2, rows, out):
    """Whole FBCT rows by grouping x on the value of D_a.

    Entry (a, b) counts ordered pairs (x, x') with D_a(x) = D_a(x') and
    x' - x = b, so each row costs O(q + sum of squared class sizes).
    """
    q = f.shape[0]
    d = np.empty(q, dtype=np.int64)
    count = np.empty(q, dtype=np.int64)
    start = np.empty(q + 1, dtype=np.int64)
    order = np.empty(q, dtype=np.int64)
    row = np.empty(q, dtype=np.int64)
    for a in rows:
        _pairs_row(f, add, neg, char2, a, d, count, start, order, row)
        for b in range(q):
            out[a, b] = row[b]


# Row maxima: same counting as fbct_rows_pairs, but classes are linked lists,
# the maximum is tracked while counting and only touched cells are reset.
# One kernel per arithmetic so the inner loops stay branch-free.

@njit(cache=True, nogil=True)
def row_maxima_char2(f, rows, out):
    q = f.shape[0]
    d = np.empty(q, dtype=np.int32)
    head = np.full(q, -1, dtype=np.int32)
    nxt = np.empty(q, dtype=np.int32)
    row = np.zeros(q, dtype=np.int32)
    for a in rows:
        for x in range(q):
            v = f[x ^ a] ^ f[x]
            d[x] = v
            nxt[x] = head[v]
            head[v] = x
        best = 0
        for x in range(q):
            y = nxt[x]
            while y >= 0:
                b = x ^ y
                if b != a:
                    r = row[b] + 2
                    row[b] = r
                    if r > best:
                        best = r
                y = nxt[y]
        out[a] = best
        for x in range(q):
            head[d[x]] = -1
            y = nxt[x]
            while y >= 0:
                row[x ^ y] = 0
                y = nxt[y]


@njit(cache=True, nogil=True)
def row_maxima_prime(f, rows, out):
    # GF(p): codes are residues, so + and - are plain modular arithmetic
    q = f.shape[0]
    d = np.empty(q, dtype=np.int32)
    head = np.full(q, -1, dtype=np.int32)
    nxt = np.empty(q, dtype=np.int32)
    row = np.zeros(q, dtype=np.int32)
    for a in rows:
        for x in range(q):
            y = x + a
            if y >= q:
                y -= q
            v = f[y] - f[x]
            if v < 0:
                v += q
            d[x] = v
            nxt[x] = head[v]
            head[v] = x
        best = 0
        for x in range(q):
            y = nxt[x]
            while y >= 0:
                b = y - x
                if b < 0:
                    b += q
                r = row[b] + 1
                row[b] = r
                if r > best:
                    best = r
                c = q - b
                r = row[c] + 1
                row[c] = r
                if r > best:
                    best = r
                y = nxt[y]
        out[a] = best
        for x in range(q):
            head[d[x]] = -1
            y = nxt[x]
            while y >= 0:
                b = y - x
                if b < 0:
                    b += q
                row[b] = 0
                row[q - b] = 0
                y = nxt[y]


@njit(cache=True, nogil=True)
def row_maxima_table(f, add, neg, rows, out):
    q = f.shape[0]
    d = np.empty(q, dtype=np.int32)
    head = np.full(q, -1, dtype=np.int32)
    nxt = np.empty(q, dtype=np.int32)
    row = np.zeros(q, dtype=np.int32)
    for a in rows:
        for x in range(q):
            v = add[f[add[x, a]], neg[f[x]]]
            d[x] = v
            nxt[x] = head[v]
            head[v] = x
        best = 0
        for x in range(q):
            y = nxt[x]
            while y >= 0:
                b = add[y, neg[x]]
                r = row[b] + 1
                row[b] = r
                if r > best:
                    best = r
                c = neg[b]
                r = row[c] + 1
                row[c] = r
                if r > best:
                    best = r
                y = nxt[y]
        out[a] = best
        for x in range(q):
            head[d[x]] = -1
            y = nxt[x]
            while y >= 0:
                b = add[y, neg[x]]
                row[b] = 0
                row[neg[b]] = 0
                y = nxt[y]


@njit(cache=True, nogil=True)
def ddt_rows(f, add, neg, char2, rows, out):
    q = f.shape[0]
    d = np.empty(q, dtype=np.int64)
    for a in rows:
        _derivative(f, add, neg, char2, a, d)
        for b in range(q):
            out[a, b] = 0
        for x in range(q):
            out[a, d[x]] += 1
