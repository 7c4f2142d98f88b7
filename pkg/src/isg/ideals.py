"""Compatible order ideals, pseudogroups, nuclei, and the universal
pseudogroup of a coverage.

The semigroup of compatible order ideals C(S) multiplies ideals by setwise
product followed by down closure.  A coverage induces a nucleus on C(S) whose
fixed points, under the nucleus-twisted product, form the universal
pseudogroup; the canonical map sends an element to the closure of its
principal ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _accel
from .bitset import bits, is_subset, mask_of, popcount
from .coverages import AmbientJoins, Coverage, union as coverage_union
from .errors import (
    CompatibilityLost,
    NotAFrame,
    NotAPseudogroup,
    NotGenerating,
    NotIdempotentPure,
    NucleusAxiomFails,
    PreconditionFailed,
    SizeLimit,
    ValidationError,
)
from .semigroups import FiniteInverseSemigroup, restrict, validate_table


# -- pseudogroups -----------------------------------------------------------

@dataclass
class PseudogroupReport:
    ok: bool
    failures: list = field(default_factory=list)


class Pseudogroup:
    """A finite inverse monoid with zero in which every compatible subset has
    a join and products distribute over joins."""

    def __init__(self, sem: FiniteInverseSemigroup):
        self.sem = sem
        n = len(sem)
        jp = np.full((n, n), -1, dtype=np.int32)
        for a in range(n):
            for b in bits(sem.compat[a]):
                j = sem.join_of(1 << a | 1 << b)
                if j is not None:
                    jp[a, b] = j
        jp.flags.writeable = False
        self.join_pair_table = jp

    def __len__(self) -> int:
        return len(self.sem)

    def join_pair(self, a: int, b: int) -> Optional[int]:
        j = int(self.join_pair_table[a, b])
        return None if j < 0 else j

    def join_mask(self, mask: int) -> Optional[int]:
        return self.sem.join_of(mask)

    def is_frame(self) -> bool:
        return self.sem.is_semilattice()


def is_pseudogroup(sem: FiniteInverseSemigroup, *,
                   budget: int = 2_000_000) -> PseudogroupReport:
    """Check join existence for every compatible antichain and both
    distributivity laws.  Reports the first failing law with a witness."""
    failures = []
    if sem.zero is None:
        failures.append(("has-zero", {}))
    if sem.identity is None:
        failures.append(("has-identity", {}))
    if failures:
        return PseudogroupReport(False, failures)

    n = len(sem)
    for anti in sem.compatible_antichains(budget=budget):
        j = sem.join_of(anti)
        if j is None:
            failures.append(("join-exists", {"subset": sem.names_of(anti)}))
            return PseudogroupReport(False, failures)
        for x in range(n):
            left = sem.left_translate(x, anti)
            jl = sem.join_of(left)
            if jl != sem.m(x, j):
                failures.append(("left-distributivity",
                                 {"x": sem.names[x], "subset": sem.names_of(anti)}))
                return PseudogroupReport(False, failures)
            right = sem.right_translate(anti, x)
            jr = sem.join_of(right)
            if jr != sem.m(j, x):
                failures.append(("right-distributivity",
                                 {"x": sem.names[x], "subset": sem.names_of(anti)}))
                return PseudogroupReport(False, failures)
    return PseudogroupReport(True, [])


def as_pseudogroup(sem: FiniteInverseSemigroup, *, check: bool = True,
                   budget: int = 2_000_000) -> Pseudogroup:
    if check:
        report = is_pseudogroup(sem, budget=budget)
        if not report.ok:
            law, witness = report.failures[0]
            raise NotAPseudogroup(f"pseudogroup law {law} fails", witness=witness)
    return Pseudogroup(sem)


def as_frame(sem: FiniteInverseSemigroup, *, check: bool = True) -> Pseudogroup:
    if not sem.is_semilattice():
        bad = next(i for i in range(len(sem)) if not sem.is_idempotent(i))
        raise NotAFrame(f"element {sem.names[bad]} is not idempotent",
                        witness={"x": sem.names[bad]})
    try:
        return as_pseudogroup(sem, check=check)
    except NotAPseudogroup as exc:
        raise NotAFrame(str(exc), witness=exc.witness) from exc


# -- the ideal semigroup C(S) ----------------------------------------------

class IdealSemigroup:
    """All compatible order ideals of a base semigroup, as a semigroup.

    When the base has a zero, ideals are the down-closed pairwise-compatible
    subsets containing it ({0} is the bottom); without a zero the empty set
    is admitted and plays that role.
    """

    def __init__(self, base: FiniteInverseSemigroup, masks: Sequence[int],
                 sem: FiniteInverseSemigroup):
        self.base = base
        self.masks = tuple(masks)
        self.sem = sem
        self.index = {m: i for i, m in enumerate(self.masks)}

    def __len__(self) -> int:
        return len(self.masks)

    def ideal_name(self, i: int) -> str:
        return self.sem.names[i]


def ideal_label(base: FiniteInverseSemigroup, mask: int) -> str:
    return "{" + ",".join(base.names[i] for i in bits(mask)) + "}"


def build_ideal_semigroup(base: FiniteInverseSemigroup,
                          cap: int = 1 << 20) -> IdealSemigroup:
    """Enumerate C(S) and build its product table.

    The product of two compatible ideals is the down closure of their setwise
    product, which is again a compatible ideal; closure of the family under
    the product is asserted rather than assumed.
    """
    n = len(base)
    if 1 << n > cap:
        raise SizeLimit(f"C(S) enumeration needs 2^{n} candidates, cap is {cap}")
    require = 0 if base.zero is None else 1 << base.zero
    down = np.asarray([np.uint64(d) for d in base.down], dtype=np.uint64)
    compat = np.asarray([np.uint64(c) for c in base.compat], dtype=np.uint64)
    masks = [int(m) for m in
             _accel.down_closed_compatible_masks(down, compat, require, n)]
    masks.sort(key=lambda m: (popcount(m), m))

    index = {m: i for i, m in enumerate(masks)}
    size = len(masks)
    table = np.empty((size, size), dtype=np.int32)
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            prod = base.down_set(base.product_mask(mi, mj)) | require
            if prod not in index:
                raise ValidationError(
                    "product of compatible ideals left the family",
                    witness={"left": ideal_label(base, mi),
                             "right": ideal_label(base, mj)})
            table[i, j] = index[prod]
    sem = validate_table([ideal_label(base, m) for m in masks], table,
                         assume_associative=True)
    # idempotent ideals are exactly those inside E(S)
    for i, m in enumerate(masks):
        if sem.is_idempotent(i) != is_subset(m, base.idem_mask):
            raise ValidationError(
                "idempotents of C(S) are not the ideals inside E(S)",
                witness={"ideal": ideal_label(base, m)})
    return IdealSemigroup(base, masks, sem)


# -- nuclei ------------------------------------------------------------------

@dataclass(frozen=True)
class Nucleus:
    """A map on a semigroup satisfying the nucleus laws N1-N4."""

    domain: FiniteInverseSemigroup
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def axiom_failures(self) -> list:
        sem = self.domain
        nu = self.image
        out = []
        n = len(sem)
        for a in range(n):
            if not sem.le(a, nu[a]):
                out.append(("N1", {"a": sem.names[a]}))
            if nu[nu[a]] != nu[a]:
                out.append(("N3", {"a": sem.names[a]}))
        for a in range(n):
            for b in range(n):
                if sem.le(a, b) and not sem.le(nu[a], nu[b]):
                    out.append(("N2", {"a": sem.names[a], "b": sem.names[b]}))
                if not sem.le(sem.m(nu[a], nu[b]), nu[sem.m(a, b)]):
                    out.append(("N4", {"a": sem.names[a], "b": sem.names[b]}))
        return out

    def validate(self) -> "Nucleus":
        failures = self.axiom_failures()
        if failures:
            axiom, witness = failures[0]
            raise NucleusAxiomFails(f"nucleus axiom {axiom} fails", witness=witness)
        return self


def close_mask(cov: Coverage, mask: int) -> int:
    """Down-closed fixpoint of the coverage-forcing rule starting from a
    down-closed mask."""
    sem = cov.base
    cur = mask
    while True:
        forced = cov.forced_element(cur)
        if forced is None:
            return cur
        cur |= sem.down[forced]


def nucleus_from_coverage(base: FiniteInverseSemigroup, cov: Coverage,
                          ideals: IdealSemigroup | None = None
                          ) -> tuple[IdealSemigroup, Nucleus]:
    """The nucleus on C(S) sending an ideal to the least coverage-closed
    compatible ideal containing it, computed by fixpoint."""
    if cov.base is not base:
        raise ValidationError("coverage lives on a different semigroup")
    if ideals is None:
        ideals = build_ideal_semigroup(base)
    image = []
    for m in ideals.masks:
        closed = close_mask(cov, m)
        if not base.is_pairwise_compatible(closed):
            x, y = _incompatible_pair(base, closed)
            raise CompatibilityLost(
                "coverage closure produced an incompatible set",
                witness={"ideal": ideal_label(base, m),
                         "x": base.names[x], "y": base.names[y]})
        image.append(ideals.index[closed])
    return ideals, Nucleus(ideals.sem, tuple(image)).validate()


def _incompatible_pair(sem, mask):
    for x in bits(mask):
        bad = mask & ~sem.compat[x]
        if bad:
            return x, next(bits(bad))
    raise AssertionError


# -- nucleus quotients -------------------------------------------------------

@dataclass
class NucleusQuotient:
    """Fixed points of a nucleus with the twisted product a.b = nu(ab)."""

    source: FiniteInverseSemigroup
    nucleus: Nucleus
    sem: FiniteInverseSemigroup
    project: np.ndarray       # source index -> quotient index
    inject: np.ndarray        # quotient index -> source index
    pseudo: Optional[Pseudogroup] = None


def apply_nucleus_quotient(sem: FiniteInverseSemigroup, nucleus: Nucleus,
                           *, source_pseudo: Pseudogroup | None = None,
                           check: bool = True) -> NucleusQuotient:
    """Build the quotient and verify the structure theorems: the quotient is
    an inverse semigroup whose order is inherited, and the natural map is a
    surjective idempotent-pure homomorphism (join-preserving when the source
    is a pseudogroup)."""
    if nucleus.domain is not sem:
        raise ValidationError("nucleus lives on a different semigroup")
    nucleus.validate()
    nu = nucleus.image
    fixed = [i for i in range(len(sem)) if nu[i] == i]
    pos = {f: i for i, f in enumerate(fixed)}
    project = np.asarray([pos[nu[i]] for i in range(len(sem))], dtype=np.int32)
    inject = np.asarray(fixed, dtype=np.int32)
    table = [[pos[nu[sem.m(a, b)]] for b in fixed] for a in fixed]
    qsem = validate_table([sem.names[f] for f in fixed], table)

    if check:
        for i, a in enumerate(fixed):
            for j, b in enumerate(fixed):
                if qsem.le(i, j) != sem.le(a, b):
                    raise ValidationError(
                        "quotient order differs from the inherited order",
                        witness={"a": sem.names[a], "b": sem.names[b]})
        for x in range(len(sem)):
            for y in range(len(sem)):
                if int(project[sem.m(x, y)]) != qsem.m(int(project[x]), int(project[y])):
                    raise ValidationError(
                        "natural map is not a homomorphism",
                        witness={"x": sem.names[x], "y": sem.names[y]})
        for x in range(len(sem)):
            if qsem.is_idempotent(int(project[x])) and not sem.is_idempotent(x):
                raise NotIdempotentPure(
                    "natural map is not idempotent-pure",
                    witness={"x": sem.names[x]})

    qpseudo = None
    if source_pseudo is not None:
        qpseudo = as_pseudogroup(qsem, check=check)
        if check:
            # binary compatible joins generate all of them
            for a in range(len(sem)):
                for b in bits(sem.compat[a]):
                    j = sem.join_of(1 << a | 1 << b)
                    if j is None:
                        continue
                    qj = qsem.join_of(1 << int(project[a]) | 1 << int(project[b]))
                    if qj != int(project[j]):
                        raise ValidationError(
                            "natural map does not preserve joins",
                            witness={"a": sem.names[a], "b": sem.names[b]})
    return NucleusQuotient(sem, nucleus, qsem, project, inject, qpseudo)


# -- the universal pseudogroup ----------------------------------------------

@dataclass
class UniversalPseudogroup:
    base: FiniteInverseSemigroup
    coverage: Coverage
    ideals: IdealSemigroup
    nucleus: Nucleus
    quotient: NucleusQuotient
    pseudo: Pseudogroup
    pi: np.ndarray            # base index -> pseudogroup index

    def element_mask(self, i: int) -> int:
        """The ideal of base elements underlying pseudogroup element i."""
        return self.ideals.masks[int(self.quotient.inject[i])]

    def element_label(self, i: int) -> str:
        return self.quotient.sem.names[i]


def universal_pseudogroup(base: FiniteInverseSemigroup, cov: Coverage,
                          *, check: bool = True) -> UniversalPseudogroup:
    """The pseudogroup of coverage-closed compatible ideals, together with
    the canonical cover-to-join idempotent-pure map."""
    ideals, nucleus = nucleus_from_coverage(base, cov)
    cpseudo = as_pseudogroup(ideals.sem, check=check)
    quotient = apply_nucleus_quotient(ideals.sem, nucleus,
                                      source_pseudo=cpseudo, check=check)
    pseudo = quotient.pseudo
    pi = np.asarray(
        [int(quotient.project[ideals.index[close_mask(cov, base.down[a] | _req(base))]])
         for a in range(len(base))], dtype=np.int32)
    up = UniversalPseudogroup(base, cov, ideals, nucleus, quotient, pseudo, pi)
    if check:
        _check_universal_map(up)
    return up


def _req(base) -> int:
    return 0 if base.zero is None else 1 << base.zero


def _check_universal_map(up: UniversalPseudogroup):
    from .coverages import is_cover_to_join, is_idempotent_pure_map

    base, qsem = up.base, up.quotient.sem
    report = is_cover_to_join(up.coverage, up.pi, up.pseudo)
    if not report.cover_to_join:
        raise ValidationError("canonical map is not cover-to-join",
                              witness=report.witness or {})
    if not is_idempotent_pure_map(base, up.pi, qsem):
        raise NotIdempotentPure("canonical map is not idempotent-pure")
    # every closed ideal is the join of the canonical images of its members
    for i in range(len(qsem)):
        members = up.element_mask(i)
        img = mask_of(int(up.pi[a]) for a in bits(members))
        if qsem.join_of(img) != i:
            raise ValidationError(
                "closed ideal is not the join of its canonical images",
                witness={"ideal": qsem.names[i]})


# -- universal property -------------------------------------------------------

@dataclass
class FactorizationResult:
    theta_tilde: np.ndarray
    factorizes: bool
    unique: bool
    idempotent_pure: bool
    uniqueness_method: str


def verify_universal_property(up: UniversalPseudogroup, theta,
                              target: Pseudogroup, *,
                              search_cap: int = 64) -> FactorizationResult:
    """Factor a cover-to-join idempotent-pure map through the canonical map.

    The factorization sends a closed ideal to the join of its theta-image;
    uniqueness is established by exhaustive candidate search when the
    pseudogroup is small, and otherwise by the join-generation identity.
    """
    from .coverages import check_homomorphism, is_cover_to_join, is_idempotent_pure_map

    base = up.base
    tsem = target.sem
    check_homomorphism(base, theta, tsem)
    report = is_cover_to_join(up.coverage, theta, target)
    if not report.cover_to_join:
        raise PreconditionFailed("map is not cover-to-join",
                                 witness=report.witness or {})
    if not report.idempotent_pure:
        raise PreconditionFailed("map is not idempotent-pure")

    qsem = up.quotient.sem
    m = len(qsem)
    tilde = np.empty(m, dtype=np.int32)
    for i in range(m):
        img = mask_of(int(theta[a]) for a in bits(up.element_mask(i)))
        j = tsem.join_of(img)
        assert j is not None, "image of a compatible ideal lost its join"
        tilde[i] = j

    factorizes = all(int(tilde[int(up.pi[a])]) == int(theta[a])
                     for a in range(len(base)))
    hom_ok = all(int(tilde[qsem.m(i, j)]) == tsem.m(int(tilde[i]), int(tilde[j]))
                 for i in range(m) for j in range(m))
    join_ok = True
    for a in range(m):
        for b in bits(qsem.compat[a]):
            j = qsem.join_of(1 << a | 1 << b)
            if j is None:
                continue
            tj = tsem.join_of(1 << int(tilde[a]) | 1 << int(tilde[b]))
            if tj != int(tilde[j]):
                join_ok = False
    pure = is_idempotent_pure_map(qsem, tilde, tsem)
    ok = factorizes and hom_ok and join_ok

    if m <= search_cap:
        unique = _unique_by_search(up, theta, target, tilde) if ok else False
        method = "exhaustive-search"
    else:
        unique = ok
        method = "join-generation"
    return FactorizationResult(tilde, ok, unique, pure, method)


def _unique_by_search(up, theta, target, tilde) -> bool:
    """Try every target value for every pseudogroup element, pruning with the
    constraints any factoring homomorphism must satisfy; uniqueness holds when
    exactly one full assignment survives."""
    qsem = up.quotient.sem
    tsem = target.sem
    order = sorted(range(len(qsem)),
                   key=lambda i: popcount(up.element_mask(i)))
    pi_of: dict[int, int] = {}
    for a in range(len(up.base)):
        pi_of.setdefault(int(up.pi[a]), int(theta[a]))
        if pi_of[int(up.pi[a])] != int(theta[a]):
            return False

    assigned: dict[int, int] = {}

    def candidates(i: int) -> list[int]:
        out = []
        members = up.element_mask(i)
        gen = [int(up.pi[a]) for a in bits(members)]
        for t in range(len(tsem)):
            if i in pi_of and t != pi_of[i]:
                continue
            if all(g in assigned or g == i for g in gen):
                img = mask_of(assigned[g] if g != i else t for g in gen)
                if tsem.join_of(img) != t:
                    continue
            good = True
            for j, tj in assigned.items():
                if qsem.m(i, j) in assigned and tsem.m(t, tj) != assigned[qsem.m(i, j)]:
                    good = False
                    break
                if qsem.m(j, i) in assigned and tsem.m(tj, t) != assigned[qsem.m(j, i)]:
                    good = False
                    break
                if qsem.le(i, j) and not tsem.le(t, tj):
                    good = False
                    break
                if qsem.le(j, i) and not tsem.le(tj, t):
                    good = False
                    break
            if good:
                out.append(t)
        return out

    count = 0

    def rec(k: int):
        nonlocal count
        if count > 1:
            return
        if k == len(order):
            count += 1
            return
        i = order[k]
        for t in candidates(i):
            assigned[i] = t
            rec(k + 1)
            del assigned[i]

    rec(0)
    return count == 1


# -- generated coverages -------------------------------------------------------

def generated_coverage(pseudo: Pseudogroup, sub_mask: int):
    """For a generating sub-inverse-semigroup, the coverage whose covers of a
    are the compatible subsets joining to a in the ambient pseudogroup.

    Returns (sub, embed, coverage).
    """
    sem = pseudo.sem
    sub, embed = restrict(sem, sub_mask)
    for p in range(len(sem)):
        if sem.join_of(sem.down[p] & sub_mask) != p:
            raise NotGenerating(
                f"{sem.names[p]} is not a join of sub-semigroup elements",
                witness={"p": sem.names[p]})
    cov = Coverage(sub, {}, AmbientJoins(pseudo, tuple(int(e) for e in embed)))
    return sub, embed, cov


@dataclass
class ReconstructionResult:
    up: UniversalPseudogroup
    iso: np.ndarray           # universal pseudogroup index -> ambient index
    is_isomorphism: bool


def reconstruction_isomorphism(pseudo: Pseudogroup, sub_mask: int,
                               *, check: bool = True) -> ReconstructionResult:
    """Rebuild the ambient pseudogroup from a generating sub-semigroup with
    its join coverage; the closed ideals map isomorphically onto the ambient
    by taking joins."""
    sub, embed, cov = generated_coverage(pseudo, sub_mask)
    up = universal_pseudogroup(sub, cov, check=check)
    qsem = up.quotient.sem
    sem = pseudo.sem
    iso = np.empty(len(qsem), dtype=np.int32)
    for i in range(len(qsem)):
        amb = mask_of(int(embed[a]) for a in bits(up.element_mask(i)))
        j = sem.join_of(amb)
        assert j is not None
        iso[i] = j
    ok = len(set(int(x) for x in iso)) == len(qsem) == len(sem)
    if ok:
        ok = all(int(iso[qsem.m(i, j)]) == sem.m(int(iso[i]), int(iso[j]))
                 for i in range(len(qsem)) for j in range(len(qsem)))
    if ok:
        for a in range(len(qsem)):
            for b in bits(qsem.compat[a]):
                j = qsem.join_of(1 << a | 1 << b)
                if j is None:
                    continue
                if sem.join_of(1 << int(iso[a]) | 1 << int(iso[b])) != int(iso[j]):
                    ok = False
    return ReconstructionResult(up, iso, ok)


# -- nuclei on pseudogroups from coverages ------------------------------------

def nucleus_on_pseudogroup(pseudo: Pseudogroup, cov: Coverage) -> Nucleus:
    """Impose a coverage's relations directly on a pseudogroup.

    The closure rule is the coverage plus all join decompositions; sending an
    element to the join of the closure of its principal ideal is then a
    nucleus (joins of closed ideals recover the closure, which makes the map
    idempotent).
    """
    sem = pseudo.sem
    if cov.base is not sem:
        raise ValidationError("coverage lives on a different semigroup")
    self_joins = Coverage(sem, {}, AmbientJoins(pseudo, tuple(range(len(sem)))))
    full = coverage_union(cov, self_joins) if cov.joins is None else cov
    req = _req(sem)
    image = []
    for p in range(len(sem)):
        closed = close_mask(full, sem.down[p] | req)
        j = sem.join_of(closed)
        assert j is not None, "closure of a principal ideal lost its join"
        image.append(j)
    return Nucleus(sem, tuple(image)).validate()
