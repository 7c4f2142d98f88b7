"""Pure-numpy kernels.

Fallback implementations of the hot table scans, selected when
``ISG_FORCE_NUMPY=1`` is set or numba is unavailable.  Each function has a
numba twin in ``nb_kernels`` with the same signature and semantics.
"""

from __future__ import annotations

import numpy as np

# Row block size for the associativity scan; keeps the temporary n*n blocks
# under ~32MB even for tables in the low thousands.
_ASSOC_BLOCK = 64


def assoc_failure(mul: np.ndarray):
    """First (i, j, k) with (ij)k != i(jk), or None."""
    n = mul.shape[0]
    for i0 in range(0, n, _ASSOC_BLOCK):
        i1 = min(i0 + _ASSOC_BLOCK, n)
        block = mul[i0:i1]                      # (b, n)
        left = mul[block]                       # left[i, j, k] = mul[mul[i,j], k]
        right = mul[np.arange(i0, i1)[:, None, None], mul[None, :, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            i, j, k = bad[0]
            return int(i + i0), int(j), int(k)
    return None


def inverse_vector(mul: np.ndarray):
    """(inv, bad) where inv[x] is the unique generalized inverse of x.

    bad is the first x without a unique inverse (inv undefined there), else -1.
    """
    n = mul.shape[0]
    idx = np.arange(n)
    # cond[x, y] <=> x*y*x == x
    cond = mul[mul, idx[:, None]] == idx[:, None]
    both = cond & cond.T
    counts = both.sum(axis=1)
    bad = np.argwhere(counts != 1)
    inv = both.argmax(axis=1).astype(np.int32)
    if bad.size:
        return inv, int(bad[0][0])
    return inv, -1


def natural_leq(mul: np.ndarray, inv: np.ndarray) -> np.ndarray:
    """Boolean matrix of the natural partial order: leq[x, y] <=> x = y * (x^-1 x)."""
    n = mul.shape[0]
    idx = np.arange(n)
    xinvx = mul[inv, idx]
    return mul[:, xinvx].T == idx[:, None]


def compat_matrix(mul: np.ndarray, inv: np.ndarray, idem: np.ndarray) -> np.ndarray:
    """compat[x, y] <=> x^-1 y and x y^-1 are both idempotent."""
    return idem[mul[inv]] & idem[mul[:, inv]]


def down_closed_compatible_masks(down: np.ndarray, compat: np.ndarray,
                                 require: int, n: int) -> np.ndarray:
    """Enumerate all masks over n bits that are down closed, pairwise
    compatible and contain the bits of ``require``.  n <= 63."""
    total = 1 << n
    out = []
    chunk = 1 << 16
    base = np.arange(chunk, dtype=np.uint64)
    member = np.empty((chunk, n), dtype=bool)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        masks = base[: stop - start] + np.uint64(start)
        for b in range(n):
            member[: stop - start, b] = (masks >> np.uint64(b)) & np.uint64(1)
        ok = (masks & np.uint64(require)) == np.uint64(require)
        for b in range(n):
            has = member[: stop - start, b]
            ok &= ~has | ((np.uint64(down[b]) & ~masks) == np.uint64(0))
            ok &= ~has | ((masks & ~np.uint64(compat[b])) == np.uint64(0))
        out.append(masks[ok])
    return np.concatenate(out) if out else np.empty(0, dtype=np.uint64)


def masks_hitting_all(conds: np.ndarray, k: int) -> np.ndarray:
    """All masks over k bits intersecting every mask in ``conds``.  k <= 63."""
    total = 1 << k
    masks = np.arange(total, dtype=np.uint64)
    if conds.size == 0:
        return masks
    ok = np.ones(total, dtype=bool)
    for c in conds:
        ok &= (masks & c) != np.uint64(0)
    return masks[ok]
