"""Compiled inner loops for bulk diagram composition.

Diagrams are passed as restricted growth strings in an ``(m, 2n)`` int8
array. Results come back encoded as ``sum(rgs[v] * (2n)**v)`` in uint64, which
is exact for ``n <= 8``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_KERNEL_N = 8


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _compose_one(n, a, b, parent, first, relabel):
    m = 3 * n
    for v in range(m):
        parent[v] = v
    for v in range(2 * n):
        first[v] = -1
    for v in range(2 * n):
        blk = a[v]
        if first[blk] == -1:
            first[blk] = v
        else:
            ra = _find(parent, v)
            rb = _find(parent, first[blk])
            if ra != rb:
                parent[ra] = rb
    for v in range(2 * n):
        first[v] = -1
    for v in range(2 * n):
        w = v + n
        blk = b[v]
        if first[blk] == -1:
            first[blk] = w
        else:
            ra = _find(parent, w)
            rb = _find(parent, first[blk])
            if ra != rb:
                parent[ra] = rb
    for v in range(m):
        relabel[v] = -1
    base = np.uint64(2 * n)
    key = np.uint64(0)
    mult = np.uint64(1)
    nxt = 0
    for idx in range(2 * n):
        v = idx if idx < n else idx + n
        r = _find(parent, v)
        if relabel[r] == -1:
            relabel[r] = nxt
            nxt += 1
        key += np.uint64(relabel[r]) * mult
        mult *= base
    loops = 0
    for v in range(n, 2 * n):
        r = _find(parent, v)
        if relabel[r] == -1:
            relabel[r] = -2
            loops += 1
    return key, loops


@njit(cache=True)
def compose_all(n, left, right, out_key, out_loops):
    """``out[i, j]`` = product of ``left[i]`` with ``right[j]``."""
    parent = np.empty(3 * n, np.int64)
    first = np.empty(2 * n, np.int64)
    relabel = np.empty(3 * n, np.int64)
    for i in range(left.shape[0]):
        for j in range(right.shape[0]):
            k, e = _compose_one(n, left[i], right[j], parent, first, relabel)
            out_key[i, j] = k
            out_loops[i, j] = e


@njit(cache=True)
def compose_pairs(n, left, right, out_key, out_loops):
    """``out[i]`` = product of ``left[i]`` with ``right[i]``."""
    parent = np.empty(3 * n, np.int64)
    first = np.empty(2 * n, np.int64)
    relabel = np.empty(3 * n, np.int64)
    for i in range(left.shape[0]):
        k, e = _compose_one(n, left[i], right[i], parent, first, relabel)
        out_key[i] = k
        out_loops[i] = e


def encode(rgs, n: int) -> int:
    base = 2 * n
    key = 0
    mult = 1
    for x in rgs:
        key += x * mult
        mult *= base
    return key
