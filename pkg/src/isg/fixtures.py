"""Built-in semigroup families used throughout the test suite and docs.

All fixtures are correct by construction, so table validation runs with the
associativity scan skipped.
"""

from __future__ import annotations

import re
from itertools import combinations, permutations

from .errors import SizeLimit, ValidationError
from .semigroups import FiniteInverseSemigroup, from_op

DEFAULT_SIZE_CAP = 4096

_NAME_RE = re.compile(r"^\s*([a-z_]+)\s*\(\s*(\d+)\s*\)\s*$")


def make_fixture(name: str, *, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteInverseSemigroup:
    """Build a named fixture, e.g. ``symmetric_inverse(2)``."""
    m = _NAME_RE.match(name)
    if not m:
        raise ValidationError(f"bad fixture name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    builders = {
        "symmetric_inverse": symmetric_inverse,
        "powerset_semilattice": powerset_semilattice,
        "cyclic_group": cyclic_group,
        "chain_semilattice": chain_semilattice,
    }
    if kind not in builders:
        raise ValidationError(f"unknown fixture kind {kind!r}")
    return builders[kind](n, size_cap=size_cap)


def _check_cap(count: int, cap: int, what: str):
    if count > cap:
        raise SizeLimit(f"{what} has {count} elements, cap is {cap}")


def symmetric_inverse(n: int, *, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteInverseSemigroup:
    """Partial injective maps on {1..n} under composition (f*g)(x) = f(g(x)).

    Element count is sum over k of C(n,k)^2 * k!.
    """
    if n < 1:
        raise ValidationError("symmetric_inverse needs n >= 1")
    maps = []
    points = range(1, n + 1)
    for k in range(n + 1):
        for dom in combinations(points, k):
            for img in permutations(points, k):
                maps.append(tuple(zip(dom, img)))
    _check_cap(len(maps), size_cap, f"symmetric_inverse({n})")

    def name_of(pairs) -> str:
        if not pairs:
            return "0"
        if all(a == b for a, b in pairs):
            return "e" + "".join(str(a) for a, _ in pairs)
        return ".".join(f"{a}>{b}" for a, b in pairs)

    maps.sort(key=lambda p: (len(p), p))
    index = {p: i for i, p in enumerate(maps)}

    def compose(i: int, j: int) -> int:
        f = dict(maps[i])
        out = tuple((a, f[b]) for a, b in maps[j] if b in f)
        return index[tuple(sorted(out, key=lambda ab: ab[0]))]

    return from_op([name_of(p) for p in maps], compose, assume_associative=True)


def powerset_semilattice(n: int, *, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteInverseSemigroup:
    """Subsets of {1..n} under intersection.

    The empty set is named "0", the full set "1", and any other subset by the
    letters of its members (1 -> a, 2 -> b, ...), e.g. {1,3} -> "ac".
    """
    if n < 1:
        raise ValidationError("powerset_semilattice needs n >= 1")
    _check_cap(1 << n, size_cap, f"powerset_semilattice({n})")
    subsets = list(range(1 << n))
    subsets.sort(key=lambda s: (bin(s).count("1"), s))
    index = {s: i for i, s in enumerate(subsets)}
    full = (1 << n) - 1

    def name_of(s: int) -> str:
        if s == 0:
            return "0"
        if s == full:
            return "1"
        return "".join(chr(ord("a") + k) for k in range(n) if s >> k & 1)

    return from_op([name_of(s) for s in subsets],
                   lambda i, j: index[subsets[i] & subsets[j]],
                   assume_associative=True)


def cyclic_group(n: int, *, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteInverseSemigroup:
    """The cyclic group of order n; elements e, g, g2, ..."""
    if n < 1:
        raise ValidationError("cyclic_group needs n >= 1")
    _check_cap(n, size_cap, f"cyclic_group({n})")
    names = ["e"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
    return from_op(names, lambda i, j: (i + j) % n, assume_associative=True)


def chain_semilattice(n: int, *, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteInverseSemigroup:
    """The chain 0 < c1 < ... < c(n-1) under minimum."""
    if n < 1:
        raise ValidationError("chain_semilattice needs n >= 1")
    _check_cap(n, size_cap, f"chain_semilattice({n})")
    names = ["0"] + [f"c{k}" for k in range(1, n)]
    return from_op(names, min, assume_associative=True)
