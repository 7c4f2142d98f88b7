"""Timing comparison of the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel on fixtures big enough to matter (the associativity
scan on the 209-element symmetric inverse monoid is 9.1M triples) and prints
one row per kernel and backend.  Pass --full to include the 1546-element
monoid, which pushes the scan to 3.7G triples.

The production dispatch picks numba when importable; set ISG_FORCE_NUMPY=1
to run the package on the numpy path end to end.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from isg._accel import nb_kernels, np_kernels
from isg.fixtures import chain_semilattice, powerset_semilattice, symmetric_inverse


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, np_fn, nb_fn, *args):
    t_np, r_np = timed(np_fn, *args)
    nb_fn(*args)  # compile before timing
    t_nb, r_nb = timed(nb_fn, *args)
    ratio = t_np / t_nb if t_nb > 0 else float("inf")
    print(f"{name:<38} numpy {t_np*1e3:9.2f} ms   numba {t_nb*1e3:9.2f} ms"
          f"   speedup x{ratio:6.1f}")
    return r_np, r_nb


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="include symmetric_inverse(5)")
    args = parser.parse_args()

    fixtures = [symmetric_inverse(3), symmetric_inverse(4)]
    if args.full:
        fixtures.append(symmetric_inverse(5))

    for sem in fixtures:
        n = len(sem)
        print(f"\n== symmetric inverse monoid, {n} elements ==")
        bench(f"associativity scan ({n}^3 triples)",
              np_kernels.assoc_failure, nb_kernels.assoc_failure, sem.mul)
        (inv, _), _ = bench("inverse uniqueness scan",
                            np_kernels.inverse_vector, nb_kernels.inverse_vector,
                            sem.mul)
        bench("natural partial order matrix",
              np_kernels.natural_leq, nb_kernels.natural_leq, sem.mul, inv)
        idem = sem.mul[np.arange(n), np.arange(n)] == np.arange(n)
        bench("compatibility matrix",
              np_kernels.compat_matrix, nb_kernels.compat_matrix,
              sem.mul, inv, idem)

    for sem, label in [(chain_semilattice(18), "chain of 18"),
                       (powerset_semilattice(4), "powerset of 4")]:
        n = len(sem)
        print(f"\n== ideal enumeration over 2^{n} masks ({label}) ==")
        down = np.asarray([np.uint64(d) for d in sem.down], dtype=np.uint64)
        compat = np.asarray([np.uint64(c) for c in sem.compat], dtype=np.uint64)
        req = 1 << sem.zero
        a, b = bench("down-closed compatible masks",
                     np_kernels.down_closed_compatible_masks,
                     nb_kernels.down_closed_compatible_masks,
                     down, compat, req, n)
        assert sorted(a.tolist()) == sorted(b.tolist())

    sem = powerset_semilattice(4)
    top = sem.index("1")
    k = sem.down[top].bit_count()
    local = list(range(k))
    conds = []
    elems = [e for e in range(len(sem))]
    for b in elems:
        if b == sem.zero:
            continue
        conds.append(sum(1 << p for p, z in enumerate(elems)
                         if sem.m(b, z) != sem.zero))
    conds = np.asarray(conds, dtype=np.uint64)
    print(f"\n== tight cover enumeration over 2^{k} masks ==")
    a, b = bench("masks hitting all conditions",
                 np_kernels.masks_hitting_all, nb_kernels.masks_hitting_all,
                 conds, k)
    assert sorted(a.tolist()) == sorted(b.tolist())


if __name__ == "__main__":
    main()
