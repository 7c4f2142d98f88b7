"""Explicit finite topologies: families of open sets as bitmasks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .bitset import bits
from .errors import SizeLimit

DEFAULT_OPEN_CAP = 1 << 16


@dataclass(frozen=True)
class FiniteTopology:
    n_points: int
    opens: frozenset[int]
    basis: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def space_mask(self) -> int:
        return (1 << self.n_points) - 1

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def minimal_neighborhood(self, x: int) -> int:
        out = self.space_mask
        for o in self.opens:
            if o >> x & 1:
                out &= o
        return out

    def closure_of(self, mask: int) -> int:
        out = self.space_mask
        for o in self.opens:
            if o & mask == 0:
                out &= ~o
        return out & self.space_mask

    def is_discrete(self) -> bool:
        return all(1 << x in self.opens for x in range(self.n_points))

    def is_t1(self) -> bool:
        # singletons closed; on a finite space this forces discreteness
        full = self.space_mask
        return all(full & ~(1 << x) in self.opens for x in range(self.n_points))

    def is_t0(self) -> bool:
        for x in range(self.n_points):
            for y in range(x + 1, self.n_points):
                if self.minimal_neighborhood(x) == self.minimal_neighborhood(y):
                    return False
        return True

    def subspace(self, keep_mask: int, labels: Optional[Sequence[str]] = None
                 ) -> "FiniteTopology":
        keep = list(bits(keep_mask))
        pos = {p: i for i, p in enumerate(keep)}

        def squeeze(mask: int) -> int:
            out = 0
            for p in keep:
                if mask >> p & 1:
                    out |= 1 << pos[p]
            return out

        opens = frozenset(squeeze(o & keep_mask) for o in self.opens)
        basis = tuple(sorted({squeeze(b & keep_mask) for b in self.basis}))
        if labels is None:
            labels = [self.labels[p] for p in keep]
        return FiniteTopology(len(keep), opens, basis, tuple(labels))


def generate_topology(n_points: int, basis: Iterable[int],
                      labels: Optional[Sequence[str]] = None,
                      cap: int = DEFAULT_OPEN_CAP) -> FiniteTopology:
    """Close a basis under union and intersection, adjoining the empty and
    full sets.  Raises SizeLimit when the family of opens would exceed the
    cap."""
    full = (1 << n_points) - 1
    basis = tuple(dict.fromkeys(basis))
    opens = {0, full} | set(basis)
    frontier = list(opens)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(opens):
                for c in (a | b, a & b):
                    if c not in opens:
                        opens.add(c)
                        fresh.append(c)
                        if len(opens) > cap:
                            raise SizeLimit(
                                f"topology exceeds {cap} open sets")
        frontier = fresh
    if labels is None:
        labels = [f"x{i}" for i in range(n_points)]
    return FiniteTopology(n_points, frozenset(opens), basis, tuple(labels))


def discrete_topology(n_points: int,
                      labels: Optional[Sequence[str]] = None) -> FiniteTopology:
    return generate_topology(n_points, [1 << i for i in range(n_points)], labels)


def generated_by(top: FiniteTopology, basis: Iterable[int]) -> bool:
    """Whether the stored opens are exactly the ones the basis generates."""
    regen = generate_topology(top.n_points, basis, top.labels,
                              cap=max(DEFAULT_OPEN_CAP, 2 * len(top.opens)))
    return regen.opens == top.opens


def open_label(top: FiniteTopology, mask: int) -> str:
    return "{" + ",".join(top.labels[i] for i in bits(mask)) + "}"
