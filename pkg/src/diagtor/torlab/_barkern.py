"""Compiled mod-p rank of a bar differential, generating columns on the fly."""

from __future__ import annotations

import heapq

import numpy as np
from numba import njit


@njit(cache=True)
def _column(j, q, m, K, C, eps, p, rows, vals):
    # digits of the q-tuple, most significant first
    dig = np.empty(q, np.int64)
    x = j
    for k in range(q - 1, -1, -1):
        dig[k] = x % m
        x //= m
    cnt = 0
    for i in range(q - 1):
        sign = p - 1 if i % 2 == 0 else 1
        pre = 0
        for k in range(i):
            pre = pre * m + dig[k]
        suf = 0
        sw = 1
        for k in range(q - 1, i + 1, -1):
            suf += dig[k] * sw
            sw *= m
        base = pre * m * sw
        u = dig[i]
        w = dig[i + 1]
        kk = K[u, w]
        if kk >= 0 and C[u, w] != 0:
            rows[cnt] = base + kk * sw + suf
            vals[cnt] = (sign * C[u, w]) % p
            cnt += 1
        if eps[w] != 0:
            rows[cnt] = base + u * sw + suf
            vals[cnt] = (sign * (p - 1)) % p
            cnt += 1
        if eps[u] != 0:
            rows[cnt] = base + w * sw + suf
            vals[cnt] = (sign * (p - 1)) % p
            cnt += 1
    return cnt


@njit(cache=True)
def _inv(a, p):
    r = 1
    e = p - 2
    b = a % p
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


@njit(cache=True)
def bar_rank_modp(q, m, K, C, eps, p, nrows, stop_at):
    """Rank over F_p of the bar differential ``d_q`` (columns = m**q tuples)."""
    ncols = m ** q
    pivot = np.full(nrows, -1, np.int64)
    start = np.zeros(1024, np.int64)
    length = np.zeros(1024, np.int64)
    pool_i = np.zeros(1 << 20, np.int64)
    pool_v = np.zeros(1 << 20, np.int64)
    used = 0
    npiv = 0
    acc = np.zeros(nrows, np.int64)
    inheap = np.zeros(nrows, np.bool_)
    rows = np.empty(3 * q, np.int64)
    vals = np.empty(3 * q, np.int64)
    touched = np.empty(nrows, np.int64)
    for j in range(ncols):
        cnt = _column(j, q, m, K, C, eps, p, rows, vals)
        heap = [np.int64(0)]
        heap.pop()
        nt = 0
        for t in range(cnt):
            r = rows[t]
            acc[r] = (acc[r] + vals[t]) % p
            if not inheap[r]:
                inheap[r] = True
                heapq.heappush(heap, -r)
                touched[nt] = r
                nt += 1
        while len(heap) > 0:
            r = -heapq.heappop(heap)
            inheap[r] = False
            c = acc[r]
            if c == 0:
                continue
            pv = pivot[r]
            if pv == -1:
                # new pivot: gather the remaining support, normalize at r
                inv = _inv(c, p)
                s = used
                nnz = 0
                for t in range(nt):
                    i = touched[t]
                    if acc[i] != 0 and i <= r:
                        if used + nnz >= pool_i.shape[0]:
                            ni = np.zeros(pool_i.shape[0] * 2, np.int64)
                            nv = np.zeros(pool_i.shape[0] * 2, np.int64)
                            ni[: pool_i.shape[0]] = pool_i
                            nv[: pool_i.shape[0]] = pool_v
                            pool_i = ni
                            pool_v = nv
                        pool_i[s + nnz] = i
                        pool_v[s + nnz] = (acc[i] * inv) % p
                        nnz += 1
                if npiv >= start.shape[0]:
                    ns = np.zeros(start.shape[0] * 2, np.int64)
                    nl = np.zeros(start.shape[0] * 2, np.int64)
                    ns[:npiv] = start[:npiv]
                    nl[:npiv] = length[:npiv]
                    start = ns
                    length = nl
                start[npiv] = s
                length[npiv] = nnz
                used += nnz
                pivot[r] = npiv
                npiv += 1
                break
            s = start[pv]
            for t in range(length[pv]):
                i = pool_i[s + t]
                old = acc[i]
                acc[i] = (old - c * pool_v[s + t]) % p
                if old == 0 and not inheap[i] and acc[i] != 0:
                    # entries are all below r, so once in the heap they stay relevant
                    inheap[i] = True
                    heapq.heappush(heap, -i)
                    touched[nt] = i
                    nt += 1
        while len(heap) > 0:
            r = -heapq.heappop(heap)
            inheap[r] = False
        for t in range(nt):
            acc[touched[t]] = 0
        if stop_at >= 0 and npiv >= stop_at:
            break
    return npiv
