"""Numba kernels for the hot table scans.

Same contracts as ``np_kernels``; these win once tables reach a few hundred
elements (the O(n^3) associativity scan in particular).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _assoc_failure(mul):
    n = mul.shape[0]
    for i in range(n):
        for j in range(n):
            ij = mul[i, j]
            for k in range(n):
                if mul[ij, k] != mul[i, mul[j, k]]:
                    return i, j, k
    return -1, -1, -1


def assoc_failure(mul: np.ndarray):
    i, j, k = _assoc_failure(mul)
    if i < 0:
        return None
    return i, j, k


@njit(cache=True)
def inverse_vector(mul):
    n = mul.shape[0]
    inv = np.full(n, -1, dtype=np.int32)
    for x in range(n):
        found = -1
        for y in range(n):
            if mul[mul[x, y], x] == x and mul[mul[y, x], y] == y:
                if found >= 0:
                    return inv, x
                found = y
        if found < 0:
            return inv, x
        inv[x] = found
    return inv, -1


@njit(cache=True)
def natural_leq(mul, inv):
    n = mul.shape[0]
    leq = np.empty((n, n), dtype=np.bool_)
    for x in range(n):
        xinvx = mul[inv[x], x]
        for y in range(n):
            leq[x, y] = mul[y, xinvx] == x
    return leq


@njit(cache=True)
def compat_matrix(mul, inv, idem):
    n = mul.shape[0]
    out = np.empty((n, n), dtype=np.bool_)
    for x in range(n):
        for y in range(n):
            out[x, y] = idem[mul[inv[x], y]] and idem[mul[x, inv[y]]]
    return out


@njit(cache=True)
def down_closed_compatible_masks(down, compat, require, n):
    total = np.uint64(1) << np.uint64(n)
    req = np.uint64(require)
    count = 0
    m = np.uint64(0)
    while m < total:
        if (m & req) == req:
            rest = m
            good = True
            while rest:
                b = 0
                t = rest
                while (t & np.uint64(1)) == np.uint64(0):
                    t >>= np.uint64(1)
                    b += 1
                if (down[b] & ~m) != np.uint64(0) or (m & ~compat[b]) != np.uint64(0):
                    good = False
                    break
                rest &= rest - np.uint64(1)
            if good:
                count += 1
        m += np.uint64(1)
    out = np.empty(count, dtype=np.uint64)
    pos = 0
    m = np.uint64(0)
    while m < total:
        if (m & req) == req:
            rest = m
            good = True
            while rest:
                b = 0
                t = rest
                while (t & np.uint64(1)) == np.uint64(0):
                    t >>= np.uint64(1)
                    b += 1
                if (down[b] & ~m) != np.uint64(0) or (m & ~compat[b]) != np.uint64(0):
                    good = False
                    break
                rest &= rest - np.uint64(1)
            if good:
                out[pos] = m
                pos += 1
        m += np.uint64(1)
    return out


@njit(cache=True)
def masks_hitting_all(conds, k):
    total = np.uint64(1) << np.uint64(k)
    nc = conds.shape[0]
    count = 0
    m = np.uint64(0)
    while m < total:
        good = True
        for c in range(nc):
            if (m & conds[c]) == np.uint64(0):
                good = False
                break
        if good:
            count += 1
        m += np.uint64(1)
    out = np.empty(count, dtype=np.uint64)
    pos = 0
    m = np.uint64(0)
    while m < total:
        good = True
        for c in range(nc):
            if (m & conds[c]) == np.uint64(0):
                good = False
                break
        if good:
            out[pos] = m
            pos += 1
        m += np.uint64(1)
    return out
