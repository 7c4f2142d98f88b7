"""Tight filters, the tight coverage's frame, and the tight groupoid.

A filter is tight when it meets every tight covering of each of its
elements; equivalently it lies in the closure of the ultrafilters in the
patch topology on the filter space (which is discrete here, so the two
descriptions are compared set-for-set rather than trusted).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitset import bits, is_subset, mask_of
from .coverages import (
    Coverage,
    induced_coverage,
    minimal_covers,
    tight_coverage,
)
from .errors import NoZero
from .filters import FilterFamily, PrincipalFilter, enumerate_filters, ultrafilters
from .groupoids import (
    FiniteGroupoid,
    filter_groupoid,
    subspace_from_coverage,
)
from .ideals import (
    UniversalPseudogroup,
    as_pseudogroup,
    close_mask,
    universal_pseudogroup,
)
from .semigroups import FiniteInverseSemigroup, from_op
from .topology import FiniteTopology, generate_topology


def _require_semilattice_with_zero(sem: FiniteInverseSemigroup):
    if not sem.is_semilattice():
        raise NoZero("tight filters are defined over a semilattice; "
                     "pass E(S) for a general inverse semigroup")
    if sem.zero is None:
        raise NoZero("tight filters need a zero")


def tight_filters(sem: FiniteInverseSemigroup, cov: Coverage | None = None
                  ) -> FilterFamily:
    """Tight filters of a semilattice with zero, by the covering test.

    Minimal covers suffice: a filter meeting every minimal tight cover meets
    every tight cover.
    """
    _require_semilattice_with_zero(sem)
    if cov is None:
        cov = tight_coverage(sem)
    minimal = {a: minimal_covers(cov, a) for a in range(len(sem))}
    out = []
    for f in enumerate_filters(sem):
        carrier = f.carrier
        if all(z & carrier for a in bits(carrier) for z in minimal[a]):
            out.append(PrincipalFilter(sem, f.min, f.domain))
    return FilterFamily(tuple(out), "tight")


def tight_filters_by_closure(sem: FiniteInverseSemigroup) -> FilterFamily:
    """Tight filters as the patch closure of the ultrafilters in the filter
    space."""
    _require_semilattice_with_zero(sem)
    G, filters = filter_groupoid(sem, "patch")
    ultra = {f.min for f in ultrafilters(sem)}
    ultra_mask = mask_of(i for i, f in enumerate(filters) if f.min in ultra)
    closed = G.topology.closure_of(ultra_mask)
    out = tuple(PrincipalFilter(sem, filters[i].min, filters[i].domain)
                for i in bits(closed))
    return FilterFamily(out, "tight")


def tight_supports(sem: FiniteInverseSemigroup,
                   family: FilterFamily) -> list[int]:
    """For each element, the mask of tight filters containing it."""
    return [mask_of(i for i, f in enumerate(family) if f.carrier >> e & 1)
            for e in range(len(sem))]


def tight_filter_topology(sem: FiniteInverseSemigroup
                          ) -> tuple[FiniteTopology, FilterFamily, list[int]]:
    """The topology on the tight filters generated by the element supports."""
    family = tight_filters(sem)
    supports = tight_supports(sem, family)
    labels = [f"^{f.name()}" for f in family]
    top = generate_topology(len(family), supports, labels)
    return top, family, supports


def tight_nucleus_direct(sem: FiniteInverseSemigroup,
                         cov: Coverage | None = None) -> list[int]:
    """Closure of each principal ideal by the one-shot description: g lies in
    the closure of the ideal of e iff some tight covering of g sits below e."""
    _require_semilattice_with_zero(sem)
    if cov is None:
        cov = tight_coverage(sem)
    out = []
    for e in range(len(sem)):
        members = 0
        for g in range(len(sem)):
            if any(is_subset(z, sem.down[e]) for z in cov.sets(g)):
                members |= 1 << g
        out.append(members)
    return out


@dataclass
class TightFrameIso:
    universal: UniversalPseudogroup
    topology: FiniteTopology
    family: FilterFamily
    to_open: list[int]           # frame element -> open mask
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def tight_frame_iso(sem: FiniteInverseSemigroup) -> TightFrameIso:
    """The frame of the tight coverage against the tight-filter topology.

    Sends the closure of a principal ideal to the support of its generator
    and a general closed ideal to the union of its members' supports; checks
    the map is a bijection preserving order, meets, and binary joins, and
    that the one-shot closure formula agrees with the fixpoint closure.
    """
    _require_semilattice_with_zero(sem)
    cov = tight_coverage(sem)
    up = universal_pseudogroup(sem, cov)
    top, family, supports = tight_filter_topology(sem)
    failures = []

    direct = tight_nucleus_direct(sem, cov)
    req = 0 if sem.zero is None else 1 << sem.zero
    for e in range(len(sem)):
        if close_mask(cov, sem.down[e] | req) != direct[e]:
            failures.append(("closure-formula", {"e": sem.names[e]}))

    qsem = up.quotient.sem
    to_open = []
    seen = {}
    for i in range(len(qsem)):
        o = 0
        for e in bits(up.element_mask(i)):
            o |= supports[e]
        to_open.append(o)
        if o in seen or not top.is_open(o):
            failures.append(("not-injective-onto-opens", {"ideal": qsem.names[i]}))
        seen[o] = i
    if len(seen) != len(top.opens):
        failures.append(("not-surjective-onto-opens",
                         {"frame": len(qsem), "opens": len(top.opens)}))
    if not failures:
        for i in range(len(qsem)):
            for j in range(len(qsem)):
                if to_open[qsem.m(i, j)] != to_open[i] & to_open[j]:
                    failures.append(("meets", {"ideals": [qsem.names[i], qsem.names[j]]}))
                j2 = qsem.join_of(1 << i | 1 << j)
                # the union of two opens is open, so it is their join
                if j2 is None or to_open[j2] != to_open[i] | to_open[j]:
                    failures.append(("joins", {"ideals": [qsem.names[i], qsem.names[j]]}))
        for e in range(len(sem)):
            if to_open[int(up.pi[e])] != supports[e]:
                failures.append(("generator-to-support", {"e": sem.names[e]}))
    return TightFrameIso(up, top, family, to_open, failures)


def tight_groupoid(sem: FiniteInverseSemigroup
                   ) -> tuple[FiniteGroupoid, np.ndarray]:
    """The reduction of the patch filter groupoid to the tight filters of
    E(S).

    The reduction is taken before the topology is generated: the ambient
    patch filter space can be far too large to materialise (2^n opens) even
    when the tight part is tiny, and the subspace topology only needs the
    restricted basis.
    """
    from .groupoids import _filter_arrow_data, _filter_basis

    if sem.zero is None:
        raise NoZero("tight groupoid needs a zero")
    filters, labels, mul, inv, improper = _filter_arrow_data(sem, False)
    esem, to_parent = sem.idempotent_semilattice()
    tight_mins = {int(to_parent[f.min]) for f in tight_filters(esem)}
    d = [int(mul[inv[g], g]) for g in range(len(labels))]
    r = [int(mul[g, inv[g]]) for g in range(len(labels))]
    tight_units = {i for i, f in enumerate(filters) if f.min in tight_mins}
    keep = [g for g in range(len(labels))
            if d[g] in tight_units and r[g] in tight_units]
    pos = {g: i for i, g in enumerate(keep)}
    size = len(keep)
    rmul = np.full((size, size), -1, dtype=np.int32)
    rinv = np.empty(size, dtype=np.int32)
    for i, g in enumerate(keep):
        rinv[i] = pos[int(inv[g])]
        for j, h in enumerate(keep):
            if int(mul[g, h]) >= 0:
                rmul[i, j] = pos[int(mul[g, h])]
    keep_mask = mask_of(keep)
    basis = []
    for b in _filter_basis(sem, filters, improper, "patch", len(labels)):
        basis.append(mask_of(pos[g] for g in bits(b & keep_mask)))
    rlabels = [labels[g] for g in keep]
    top = generate_topology(size, basis, rlabels)
    G = FiniteGroupoid(rlabels, rmul, rinv, top)
    return G, np.asarray(keep, dtype=np.int32)


def tight_subspace_of_filter_space(sem: FiniteInverseSemigroup) -> tuple[int, list]:
    """Cut the filter space down by the coverage induced from the tight one.

    Builds the patch topology on all filters of a semilattice, induces the
    tight coverage onto its frame of opens through e -> U_e, and applies the
    subspace construction; returns the surviving point mask and the filter
    list (for comparison against the tight filters).
    """
    _require_semilattice_with_zero(sem)
    G, filters = filter_groupoid(sem, "patch")
    top = G.topology
    opens = sorted(top.opens)
    pos = {o: k for k, o in enumerate(opens)}
    frame_sem = from_op([f"O{k}" for k in range(len(opens))],
                        lambda i, j: pos[opens[i] & opens[j]],
                        assume_associative=True)
    frame = as_pseudogroup(frame_sem, check=False)
    u_mask = [mask_of(i for i, f in enumerate(filters) if f.carrier >> e & 1)
              for e in range(len(sem))]
    theta = np.asarray([pos[m] for m in u_mask], dtype=np.int32)
    cov = induced_coverage(tight_coverage(sem), theta, frame)
    kept = subspace_from_coverage(top, frame_sem, [opens[k] for k in range(len(opens))], cov)
    return kept, filters
