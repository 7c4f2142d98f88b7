"""Finite inverse semigroups given by multiplication tables.

Elements are dense indices 0..n-1 bound to a name table; subsets are int
bitmasks (see ``bitset``).  Validation computes, once, everything the rest of
the package leans on: the inverse map, idempotents, the natural partial order
as an n x n matrix, and per-element down-set/up-set/compatibility masks.
A validated structure is immutable and safe to share.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from . import _accel
from .bitset import bits, mask_of
from .errors import (
    NonAssociative,
    NotInverseSemigroup,
    SizeLimit,
    ValidationError,
    ZeroViolation,
)


class FiniteInverseSemigroup:
    """A validated finite inverse semigroup.

    Attributes
    ----------
    names: element names, index-aligned.
    mul:   (n, n) int32 table, mul[i, j] = index of the product.
    inv:   the unique generalized inverse of each element.
    zero:  index of the absorbing element, if any.
    identity: index of the two-sided identity, if any.
    leq:   (n, n) bool matrix of the natural partial order, leq[x, y] <=> x <= y.
    down, up: per-element bitmasks of the lower and upper sets.
    compat: per-element bitmasks of the compatibility relation.
    idem_mask: bitmask of the idempotents.
    """

    __slots__ = ("names", "mul", "inv", "zero", "identity", "leq", "down",
                 "up", "compat", "idem_mask", "_index", "_semilattice")

    def __init__(self, names, mul, inv, zero, identity, leq, idem_mask):
        n = len(names)
        self.names: tuple[str, ...] = tuple(names)
        self.mul = mul
        self.inv = inv
        self.zero: Optional[int] = zero
        self.identity: Optional[int] = identity
        self.leq = leq
        self.idem_mask: int = idem_mask
        self.down = tuple(mask_of(np.flatnonzero(leq[:, y]).tolist()) for y in range(n))
        self.up = tuple(mask_of(np.flatnonzero(leq[x, :]).tolist()) for x in range(n))
        cm = _accel.compat_matrix(mul, inv, self._idem_vector())
        self.compat = tuple(mask_of(np.flatnonzero(cm[x]).tolist()) for x in range(n))
        self._index = {name: i for i, name in enumerate(self.names)}
        self._semilattice = None
        for a in (self.mul, self.inv, self.leq):
            a.flags.writeable = False

    def _idem_vector(self) -> np.ndarray:
        n = len(self.names)
        v = np.zeros(n, dtype=bool)
        for i in bits(self.idem_mask):
            v[i] = True
        return v

    # -- basics ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FiniteInverseSemigroup({len(self)} elements)"

    @property
    def all_mask(self) -> int:
        return (1 << len(self)) - 1

    def index(self, name: str) -> int:
        return self._index[name]

    def m(self, x: int, y: int) -> int:
        return int(self.mul[x, y])

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def is_idempotent(self, x: int) -> bool:
        return bool(self.idem_mask >> x & 1)

    def compatible(self, x: int, y: int) -> bool:
        return bool(self.compat[x] >> y & 1)

    def is_semilattice(self) -> bool:
        return self.idem_mask == self.all_mask

    # -- subsets --------------------------------------------------------

    def down_set(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= self.down[x]
        return out

    def up_set(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= self.up[x]
        return out

    def product_mask(self, a: int, b: int) -> int:
        out = 0
        for x in bits(a):
            row = self.mul[x]
            for y in bits(b):
                out |= 1 << int(row[y])
        return out

    def inv_mask(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= 1 << int(self.inv[x])
        return out

    def left_translate(self, b: int, mask: int) -> int:
        out = 0
        row = self.mul[b]
        for x in bits(mask):
            out |= 1 << int(row[x])
        return out

    def right_translate(self, mask: int, b: int) -> int:
        out = 0
        col = self.mul[:, b]
        for x in bits(mask):
            out |= 1 << int(col[x])
        return out

    def is_down_closed(self, mask: int) -> bool:
        return self.down_set(mask) == mask

    def is_pairwise_compatible(self, mask: int) -> bool:
        for x in bits(mask):
            if mask & ~self.compat[x]:
                return False
        return True

    def join_of(self, mask: int) -> Optional[int]:
        """Least upper bound of the subset, or None if it does not exist.

        The join of the empty set is the zero when present.
        """
        if mask == 0:
            return self.zero
        ub = self.all_mask
        for x in bits(mask):
            ub &= self.up[x]
        for m in bits(ub):
            if ub & ~self.up[m] == 0:
                return m
        return None

    def meet_of(self, mask: int) -> Optional[int]:
        if mask == 0:
            return self.identity
        lb = self.all_mask
        for x in bits(mask):
            lb &= self.down[x]
        for m in bits(lb):
            if lb & ~self.down[m] == 0:
                return m
        return None

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def mask_of_names(self, names: Iterable[str]) -> int:
        return mask_of(self.index(n) for n in names)

    # -- idempotent semilattice ------------------------------------------

    def idempotent_semilattice(self):
        """E(S) as a semigroup in its own right, with the embedding into S.

        Returns (E, to_parent) where to_parent[i] is the S-index of E-element i.
        Cached; repeated calls return the same objects.
        """
        if self._semilattice is None:
            self._semilattice = restrict(self, self.idem_mask)
        return self._semilattice

    def compatible_antichains(self, within: Optional[int] = None,
                              budget: int = 2_000_000) -> Iterator[int]:
        """Yield all nonempty pairwise-compatible antichains as masks.

        Joins of arbitrary compatible sets reduce to joins of their maximal
        elements, so these are the only subsets join checks need to visit.
        """
        if within is None:
            within = self.all_mask
        order = [i for i in range(len(self)) if within >> i & 1]
        incomparable = [~(self.up[i] | self.down[i]) for i in range(len(self))]
        visited = 0

        def rec(mask: int, allowed: int, start: int) -> Iterator[int]:
            nonlocal visited
            for idx in range(start, len(order)):
                i = order[idx]
                if not allowed >> i & 1:
                    continue
                visited += 1
                if visited > budget:
                    raise SizeLimit(
                        f"antichain enumeration exceeded {budget} nodes")
                new = mask | 1 << i
                yield new
                yield from rec(new, allowed & incomparable[i] & self.compat[i],
                               idx + 1)

        yield from rec(0, within, 0)


def validate_table(names: Sequence[str], table: Sequence[Sequence[int]],
                   zero: Optional[int] = None, identity: Optional[int] = None,
                   *, assume_associative: bool = False) -> FiniteInverseSemigroup:
    """Validate a multiplication table as a finite inverse semigroup.

    Checks associativity over all triples (unless the table is known correct
    by construction), existence and uniqueness of generalized inverses, and
    absorption/identity laws for a declared zero/identity.  Detects an
    undeclared zero or identity.
    """
    n = len(names)
    if len(set(names)) != n:
        raise ValidationError("duplicate element names")
    mul = np.asarray(table, dtype=np.int32)
    if mul.shape != (n, n):
        raise ValidationError(f"table must be {n}x{n}, got {mul.shape}")
    if mul.min(initial=0) < 0 or mul.max(initial=0) >= n:
        raise ValidationError("table entry out of range")

    if not assume_associative:
        bad = _accel.assoc_failure(mul)
        if bad is not None:
            i, j, k = bad
            raise NonAssociative(
                f"({names[i]}*{names[j]})*{names[k]} != {names[i]}*({names[j]}*{names[k]})",
                witness={"i": names[i], "j": names[j], "k": names[k]})

    inv, bad_x = _accel.inverse_vector(mul)
    if bad_x >= 0:
        raise NotInverseSemigroup(
            f"element {names[bad_x]} has no unique generalized inverse",
            witness={"x": names[bad_x]})

    found_zero = _detect_zero(mul)
    if zero is not None and zero != found_zero:
        raise ZeroViolation(
            f"declared zero {names[zero]} fails absorption",
            witness={"zero": names[zero]})
    found_identity = _detect_identity(mul)
    if identity is not None and identity != found_identity:
        raise ValidationError(
            f"declared identity {names[identity]} is not an identity",
            witness={"identity": names[identity]})

    idem_mask = mask_of(int(i) for i in np.flatnonzero(mul[np.arange(n), np.arange(n)] == np.arange(n)))
    # E(S) = {x^-1 x}; cross-check the two descriptions.
    alt = mask_of(int(mul[inv[x], x]) for x in range(n))
    if alt != idem_mask:
        raise NotInverseSemigroup("idempotents differ from {x^-1 x | x in S}")

    leq = _accel.natural_leq(mul, inv)
    return FiniteInverseSemigroup(names, mul, inv, found_zero, found_identity,
                                  leq, idem_mask)


def _detect_zero(mul: np.ndarray) -> Optional[int]:
    n = mul.shape[0]
    for e in range(n):
        if (mul[e] == e).all() and (mul[:, e] == e).all():
            return e
    return None


def _detect_identity(mul: np.ndarray) -> Optional[int]:
    n = mul.shape[0]
    rng = np.arange(n)
    for e in range(n):
        if (mul[e] == rng).all() and (mul[:, e] == rng).all():
            return e
    return None


def from_op(names: Sequence[str], op, *, assume_associative: bool = False
            ) -> FiniteInverseSemigroup:
    """Build a semigroup from a binary operation on indices."""
    n = len(names)
    table = [[op(i, j) for j in range(n)] for i in range(n)]
    return validate_table(names, table, assume_associative=assume_associative)


def restrict(sem: FiniteInverseSemigroup, mask: int):
    """The sub-inverse-semigroup on ``mask``, which must be closed.

    Returns (sub, to_parent) with to_parent mapping sub indices to parent
    indices.  Associativity is inherited; the inverse map is recomputed and
    must stay inside the subset.
    """
    keep = list(bits(mask))
    pos = {p: i for i, p in enumerate(keep)}
    for x in keep:
        if not mask >> int(sem.inv[x]) & 1:
            raise ValidationError(f"subset not closed under inverse at {sem.names[x]}")
        for y in keep:
            if not mask >> sem.m(x, y) & 1:
                raise ValidationError(
                    f"subset not closed under product at {sem.names[x]}*{sem.names[y]}")
    table = [[pos[sem.m(x, y)] for y in keep] for x in keep]
    sub = validate_table([sem.names[x] for x in keep], table,
                         assume_associative=True)
    return sub, np.asarray(keep, dtype=np.int32)


# -- module-level forms of the basic operations -------------------------

def idempotents(sem: FiniteInverseSemigroup) -> int:
    return sem.idem_mask


def leq(sem: FiniteInverseSemigroup, x: int, y: int) -> bool:
    return sem.le(x, y)


def compatible(sem: FiniteInverseSemigroup, x: int, y: int) -> bool:
    return sem.compatible(x, y)


def down_set(sem: FiniteInverseSemigroup, mask: int) -> int:
    return sem.down_set(mask)


def up_set(sem: FiniteInverseSemigroup, mask: int) -> int:
    return sem.up_set(mask)
