"""Compiled inner loops. Everything here works on plain int64 arrays.

Graph points of an (n,n)-function are packed as ``x | y << n``; the constant
coordinate of W = F_2^(2n) + 1 is implicit.
"""

import numpy as np
from numba import njit

_OPTS = dict(cache=True, nogil=True)


@njit(**_OPTS)
def fwht_inplace(a):
    """Unnormalised Walsh-Hadamard butterfly along a 1-d int64 array."""
    n = a.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, h << 1):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h <<= 1


@njit(**_OPTS)
def fwht_rows(mat):
    for r in range(mat.shape[0]):
        fwht_inplace(mat[r])


@njit(**_OPTS)
def _lowbit_index(v):
    i = 0
    while not (v >> i) & 1:
        i += 1
    return i


@njit(**_OPTS)
def carlet_max(W, n, m, code_lo, code_hi):
    """Maximise sum_v (-1)^(v.b) W[v, Lstar(v)] over b and linear Lstar: F_2^m -> F_2^n.

    ``W[b, a]`` holds the Walsh coefficient W_f(a, b). A linear map is encoded by the
    integer whose j-th n-bit digit is Lstar(e_j); codes in [code_lo, code_hi) are tried
    in increasing order, and the first strict maximum wins.
    """
    M = 1 << m
    mask = (1 << n) - 1
    imgs = np.zeros(m, np.int64)
    lv = np.zeros(M, np.int64)
    buf = np.zeros(M, np.int64)
    best = np.int64(-(1 << 62))
    best_code = -1
    best_b = -1
    for code in range(code_lo, code_hi):
        c = code
        for j in range(m):
            imgs[j] = c & mask
            c >>= n
        for v in range(1, M):
            low = v & -v
            lv[v] = lv[v ^ low] ^ imgs[_lowbit_index(low)]
        for v in range(M):
            buf[v] = W[v, lv[v]]
        fwht_inplace(buf)
        for b in range(M):
            if buf[b] > best:
                best = buf[b]
                best_code = code
                best_b = b
    return best, best_code, best_b


@njit(**_OPTS)
def center_leaves(table, n, w):
    """Leaves {a, b, c} (x-coordinates, a < b < c) of graph points summing to w."""
    N = 1 << n
    mask = N - 1
    wx = w & mask
    wy = w >> n
    out = np.empty((N * N // 6 + 1, 3), np.int64)
    k = 0
    for a in range(N):
        fa = table[a]
        for b in range(a + 1, N):
            c = a ^ b ^ wx
            if c > b and (fa ^ table[b] ^ table[c]) == wy:
                out[k, 0] = a
                out[k, 1] = b
                out[k, 2] = c
                k += 1
    return out[:k]


@njit(**_OPTS)
def _reduce(v, basis, pivots, k):
    for i in range(k):
        if (v >> pivots[i]) & 1:
            v ^= basis[i]
    return v


@njit(**_OPTS)
def _fill_table(out, n, wx, wy, basis, k, ext_bit, c):
    """Truth table of the affine map whose graph is span(w; basis) [+ extension]."""
    mask = (1 << n) - 1
    x = wx
    y = wy
    out[x] = y
    for i in range(1, 1 << k):
        d = basis[_lowbit_index(i)]
        x ^= d & mask
        y ^= d >> n
        out[x] = y
        if ext_bit >= 0:
            out[x ^ (1 << ext_bit)] = y ^ c
    if ext_bit >= 0:
        out[wx ^ (1 << ext_bit)] = wy ^ c


@njit(**_OPTS)
def scan_center(table, n, w, t, s, stop_at_hit, best_in, best_table):
    """Scan every size-t gerbera configuration centred at w in the graph of ``table``.

    For each configuration whose affine span projects injectively onto the input
    coordinates, the best graph of an affine map containing the span is evaluated
    (2t == n: the span itself; 2t == n - 1: all extensions by one direction).

    Returns (best, configs_visited, hit). ``best_table`` is overwritten whenever a
    count strictly above ``best_in`` is found; ``hit`` is True once a count >= s occurs.
    """
    N = 1 << n
    mask = N - 1
    wx = w & mask
    wy = w >> n
    leaves = center_leaves(table, n, w)
    L = leaves.shape[0]
    best = best_in
    visited = 0
    hit = False
    if L < t:
        return best, visited, hit
    k2 = 2 * t
    basis = np.zeros(k2, np.int64)
    pivots = np.zeros(k2, np.int64)
    choice = np.zeros(t, np.int64)
    hist = np.zeros(N, np.int64)
    touched = np.zeros(N, np.int64)
    depth = 0
    choice[0] = -1
    while depth >= 0:
        choice[depth] += 1
        if choice[depth] > L - (t - depth):
            depth -= 1
            continue
        li = choice[depth]
        # add two directions of leaf li to the basis at slots 2*depth, 2*depth+1
        ok = True
        k = 2 * depth
        for q in range(2):
            xa = leaves[li, q]
            v = (xa | (table[xa] << n)) ^ w
            v = _reduce(v, basis, pivots, k)
            if (v & mask) == 0:
                ok = False
                break
            basis[k] = v
            pivots[k] = _lowbit_index(v & mask)
            k += 1
        if not ok:
            continue
        if depth + 1 < t:
            depth += 1
            choice[depth] = choice[depth - 1]
            continue
        visited += 1
        # full configuration: count graph points on the span (Gray walk)
        x = wx
        y = wy
        cnt = 1 if table[x] == y else 0
        for i in range(1, 1 << k2):
            d = basis[_lowbit_index(i)]
            x ^= d & mask
            y ^= d >> n
            if table[x] == y:
                cnt += 1
        total = cnt
        ext_bit = -1
        ext_c = 0
        if k2 == n - 1:
            used = 0
            for i in range(k2):
                used |= 1 << pivots[i]
            ext_bit = 0
            while (used >> ext_bit) & 1:
                ext_bit += 1
            e = 1 << ext_bit
            nt = 0
            x = wx
            y = wy
            key = table[x ^ e] ^ y
            hist[key] += 1
            touched[nt] = key
            nt += 1
            for i in range(1, 1 << k2):
                d = basis[_lowbit_index(i)]
                x ^= d & mask
                y ^= d >> n
                key = table[x ^ e] ^ y
                if hist[key] == 0:
                    touched[nt] = key
                    nt += 1
                hist[key] += 1
            bestc = 0
            bestkey = 0
            for i in range(nt):
                key = touched[i]
                if hist[key] > bestc or (hist[key] == bestc and key < bestkey):
                    bestc = hist[key]
                    bestkey = key
            for i in range(nt):
                hist[touched[i]] = 0
            total = cnt + bestc
            ext_c = bestkey
        elif k2 != n:
            total = -1
        if total > best:
            best = total
            _fill_table(best_table, n, wx, wy, basis, k2, ext_bit, ext_c)
        if total >= s:
            hit = True
            if stop_at_hit:
                return best, visited, hit
    return best, visited, hit


@njit(**_OPTS)
def count_agreements(table, other):
    c = 0
    for i in range(table.shape[0]):
        if table[i] == other[i]:
            c += 1
    return c
