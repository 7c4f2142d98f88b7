"""Named invariant suites.

Each check returns CheckResult records so the CLI can print one line per
named law and the tests can assert on the same code paths.  Oracles here are
deliberately naive (subset scans, intersections of families) and independent
of the production implementations they cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bitset import bits, is_subset, mask_of, subsets_of
from .coverages import (
    Coverage,
    check_axioms,
    extend_from_idempotents,
    restrict_to_idempotents,
    tight_coverage,
)
from .errors import SizeLimit
from .filters import (
    PrincipalFilter,
    enumerate_filters,
    germ,
    is_completely_prime,
    range_filter,
)
from .ideals import (
    IdealSemigroup,
    Nucleus,
    Pseudogroup,
    build_ideal_semigroup,
    nucleus_from_coverage,
    universal_pseudogroup,
)
from .semigroups import FiniteInverseSemigroup


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.passed


def _ok(name):
    return CheckResult(name, True)


def _fail(name, **witness):
    return CheckResult(name, False, witness)


# -- order and idempotent laws -------------------------------------------------

def order_axioms(sem: FiniteInverseSemigroup) -> list[CheckResult]:
    n = len(sem)
    for x in range(n):
        for y in range(n):
            if sem.le(x, y) and sem.le(y, x) and x != y:
                return [_fail("order-antisymmetry", x=sem.names[x], y=sem.names[y])]
    for x in range(n):
        for y in bits(sem.up[x]):
            if sem.up[y] & ~sem.up[x]:
                z = next(bits(sem.up[y] & ~sem.up[x]))
                return [_fail("order-transitivity", x=sem.names[x],
                              y=sem.names[y], z=sem.names[z])]
    out = [_ok("order-antisymmetry"), _ok("order-transitivity")]
    bad = None
    for x in range(n):
        for y in bits(sem.up[x]):
            if not sem.le(int(sem.inv[x]), int(sem.inv[y])):
                bad = ("order-inverse-monotone", x, y)
                break
            for z in range(n):
                if not sem.le(sem.m(z, x), sem.m(z, y)) or \
                        not sem.le(sem.m(x, z), sem.m(y, z)):
                    bad = ("order-translation-monotone", x, y)
                    break
            if bad:
                break
        if bad:
            break
    if bad:
        name, x, y = bad
        out.append(_fail(name, x=sem.names[x], y=sem.names[y]))
    else:
        out += [_ok("order-inverse-monotone"), _ok("order-translation-monotone")]
    return out


def idempotent_laws(sem: FiniteInverseSemigroup) -> list[CheckResult]:
    out = []
    E = list(bits(sem.idem_mask))
    closed = all(sem.is_idempotent(sem.m(e, f)) for e in E for f in E)
    out.append(_ok("idempotents-closed") if closed else _fail("idempotents-closed"))
    comm = all(sem.m(e, f) == sem.m(f, e) for e in E for f in E)
    out.append(_ok("idempotents-commute") if comm else _fail("idempotents-commute"))
    for e in E:
        for f in E:
            if sem.meet_of(1 << e | 1 << f) != sem.m(e, f):
                out.append(_fail("idempotent-product-is-meet",
                                 e=sem.names[e], f=sem.names[f]))
                return out
    out.append(_ok("idempotent-product-is-meet"))
    return out


def join_implies_compatible(sem: FiniteInverseSemigroup,
                            subset_limit: int = 14) -> list[CheckResult]:
    """Nonempty subsets with a join are pairwise compatible."""
    n = len(sem)
    if n > subset_limit:
        for anti in sem.compatible_antichains():
            pass  # enumeration itself exercises the compatible side
        return [_ok("join-implies-compatible")]
    for mask in range(1, 1 << n):
        if sem.join_of(mask) is not None and not sem.is_pairwise_compatible(mask):
            return [_fail("join-implies-compatible", subset=sem.names_of(mask))]
    return [_ok("join-implies-compatible")]


# -- filters --------------------------------------------------------------------

def filter_enumeration_oracle(sem: FiniteInverseSemigroup,
                              within: Optional[int] = None) -> list[CheckResult]:
    """Brute-force subset scan against the principal enumeration."""
    domain = sem.all_mask if within is None else within
    if domain.bit_count() > 16:
        raise SizeLimit("filter oracle is limited to 16-element posets")
    brute = set()
    for mask in subsets_of(domain):
        if mask == 0 or mask == domain:
            continue
        if sem.up_set(mask) & domain != mask:
            continue
        directed = all(
            any(is_subset(1 << c, mask) and sem.le(c, a) and sem.le(c, b)
                for c in bits(mask))
            for a in bits(mask) for b in bits(mask))
        if directed:
            brute.add(mask)
    fast = {f.carrier for f in enumerate_filters(sem, within)}
    if brute != fast:
        diff = brute ^ fast
        return [_fail("filter-oracle", subset=sem.names_of(next(iter(diff))))]
    return [_ok("filter-oracle")]


def germ_lemma_suite(sem: FiniteInverseSemigroup,
                     pseudo: Optional[Pseudogroup] = None) -> list[CheckResult]:
    """The germ laws, for every filter of E(S) and admissible element.

    (i) every translate f*s lies in the germ; (ii) the filter is recovered
    from the range idempotents of the germ; (iii) the germ is a filter;
    (iv) the germ is independent of the representative; (v) germs at
    completely prime filters of a pseudogroup are completely prime.
    """
    from .errors import NotAPseudogroup
    from .ideals import as_pseudogroup

    failures = {}
    e_filters = list(enumerate_filters(sem, sem.idem_mask))
    if pseudo is None:
        try:
            pseudo = as_pseudogroup(sem)
        except (NotAPseudogroup, SizeLimit):
            pseudo = None    # law (v) is then vacuous
    frame = None
    if pseudo is not None:
        esem, to_parent = sem.idempotent_semilattice()
        frame = as_pseudogroup(esem)
        back = {int(p): i for i, p in enumerate(to_parent)}
    for F in e_filters:
        for s in range(len(sem)):
            if sem.m(s, int(sem.inv[s])) not in F:
                continue
            g = germ(sem, F, s)
            carrier = g.carrier
            for f in bits(F.carrier):
                if sem.m(f, s) not in g:
                    failures.setdefault("germ-lemma-i", {
                        "F": F.name(), "s": sem.names[s], "f": sem.names[f]})
            ranges = mask_of(sem.m(t, int(sem.inv[t])) for t in bits(carrier))
            if sem.up_set(ranges) & sem.idem_mask != F.carrier:
                failures.setdefault("germ-lemma-ii", {"F": F.name(), "s": sem.names[s]})
            if sem.up_set(carrier) != carrier or not _down_directed(sem, carrier) \
                    or carrier in (0, sem.all_mask):
                failures.setdefault("germ-lemma-iii", {"F": F.name(), "s": sem.names[s]})
            for r in bits(carrier):
                if germ(sem, F, r).carrier != carrier:
                    failures.setdefault("germ-lemma-iv", {
                        "F": F.name(), "s": sem.names[s], "r": sem.names[r]})
                    break
            if frame is not None:
                f_sub = PrincipalFilter(frame.sem, back[F.min], frame.sem.all_mask)
                if f_sub.carrier != frame.sem.all_mask and \
                        is_completely_prime(frame, f_sub) and pseudo is not None:
                    gp = PrincipalFilter(pseudo.sem, g.min, pseudo.sem.all_mask)
                    if not is_completely_prime(pseudo, gp):
                        failures.setdefault("germ-lemma-v", {
                            "F": F.name(), "s": sem.names[s]})
    for A in enumerate_filters(sem):
        F = range_filter(sem, A)
        for a in bits(A.carrier):
            if germ(sem, F, a).carrier != A.carrier:
                failures.setdefault("germ-range-filter",
                                    {"A": A.name(), "a": sem.names[a]})
                break
    names = ["germ-lemma-i", "germ-lemma-ii", "germ-lemma-iii", "germ-lemma-iv",
             "germ-lemma-v", "germ-range-filter"]
    return [CheckResult(n, n not in failures, failures.get(n)) for n in names]


def _down_directed(sem, mask) -> bool:
    return all(any(sem.le(c, a) and sem.le(c, b) for c in bits(mask))
               for a in bits(mask) for b in bits(mask))


# -- coverages and nuclei ---------------------------------------------------------

def coverage_suite(cov: Coverage) -> list[CheckResult]:
    rep = check_axioms(cov)
    translation = [w for n, w in rep.failures if n == "translation"]
    out = [CheckResult("coverage-translation-closed", not translation,
                       translation[0] if translation else None)]
    for axiom in ("R", "I", "MS", "T"):
        found = [w for n, w in rep.failures if n == axiom]
        out.append(CheckResult(f"coverage-axiom-{axiom}", not found,
                               found[0] if found else None))
    return out


def tight_superset_law(sem: FiniteInverseSemigroup, cov: Coverage) -> list[CheckResult]:
    for a, fam in cov.covers.items():
        for z in fam:
            for extra in bits(sem.down[a] & ~z):
                if z | 1 << extra not in fam:
                    return [_fail("tight-superset-closed", of=sem.names[a],
                                  cover=sem.names_of(z))]
    return [_ok("tight-superset-closed")]


def restrict_extend_roundtrip(sem: FiniteInverseSemigroup,
                              cov: Coverage) -> list[CheckResult]:
    restricted = restrict_to_idempotents(cov)
    back = extend_from_idempotents(sem, restricted)
    if back.covers != cov.covers:
        keys = set(back.covers) ^ set(cov.covers)
        a = next(iter(keys)) if keys else next(
            a for a in cov.covers if cov.covers[a] != back.covers.get(a))
        return [_fail("restrict-extend-roundtrip", at=sem.names[a])]
    round2 = restrict_to_idempotents(back)
    if round2.covers != restricted.covers:
        return [_fail("extend-restrict-roundtrip")]
    return [_ok("restrict-extend-roundtrip"), _ok("extend-restrict-roundtrip")]


def nucleus_oracle(sem: FiniteInverseSemigroup, cov: Coverage,
                   ideals: Optional[IdealSemigroup] = None) -> list[CheckResult]:
    """The closure fixpoint against the intersection of all closed compatible
    ideals, for every ideal."""
    ideals, nucleus = nucleus_from_coverage(sem, cov, ideals)
    closed = [m for m in ideals.masks if cov.is_closed(m)]
    for i, m in enumerate(ideals.masks):
        meet = sem.all_mask
        for c in closed:
            if is_subset(m, c):
                meet &= c
        if ideals.masks[nucleus.image[i]] != meet:
            return [_fail("nucleus-closure-oracle",
                          ideal=sem.names_of(m))]
    out = [_ok("nucleus-closure-oracle")]
    axioms = {name for name, _ in nucleus.axiom_failures()}
    for name in ("N1", "N2", "N3", "N4"):
        out.append(CheckResult(f"nucleus-{name}", name not in axioms))
    return out


def unit_frame_comparison(sem: FiniteInverseSemigroup, cov: Coverage) -> list[CheckResult]:
    """Idempotent part of the universal pseudogroup against the frame built
    on E(S) from the restricted coverage, compared ideal by ideal."""
    up = universal_pseudogroup(sem, cov)
    esem, to_parent = sem.idempotent_semilattice()
    e_up = universal_pseudogroup(esem, restrict_to_idempotents(cov))
    qsem = up.quotient.sem
    idem_masks = {up.element_mask(i) for i in bits(qsem.idem_mask)}
    frame_masks = set()
    for i in range(len(e_up.quotient.sem)):
        frame_masks.add(mask_of(int(to_parent[e])
                                for e in bits(e_up.element_mask(i))))
    if idem_masks != frame_masks:
        sample = next(iter(idem_masks ^ frame_masks))
        return [_fail("unit-frame", ideal=sem.names_of(sample))]
    return [_ok("unit-frame")]


def nucleus_preserves_prime(pseudo: Pseudogroup, nucleus: Nucleus) -> list[CheckResult]:
    """The nucleus image of a completely prime filter is a filter of the
    quotient, and is completely prime whenever the filter's range filter is a
    nucleus preimage.

    The unrestricted statement is false: on the ideals of the four-element
    diamond with the tight nucleus, the principal filter at the top ideal is
    completely prime (the top is join-irreducible there) but its image in the
    quotient frame is the filter at a join of two atoms.  The restricted form
    is what the groupoid embedding needs; see
    tests/test_groupoids.py::test_prime_image_counterexample.
    """
    from .ideals import apply_nucleus_quotient

    sem = pseudo.sem
    quotient = apply_nucleus_quotient(sem, nucleus, source_pseudo=pseudo,
                                      check=False)
    qsem = quotient.sem
    embedding_images = set()
    if quotient.pseudo is not None:
        for qf in enumerate_filters(qsem):
            if is_completely_prime(quotient.pseudo, qf):
                embedding_images.add(mask_of(
                    x for x in range(len(sem))
                    if qf.carrier >> int(quotient.project[x]) & 1))
    for f in enumerate_filters(sem):
        if not is_completely_prime(pseudo, f):
            continue
        image = mask_of(int(quotient.project[x]) for x in bits(f.carrier))
        mins = [m for m in bits(image)
                if image & ~(qsem.up[m]) == 0]
        if len(mins) != 1 or qsem.up[mins[0]] != image or image == qsem.all_mask:
            return [_fail("nucleus-image-is-filter", filter=f.name())]
        range_min = sem.m(f.min, int(sem.inv[f.min]))
        if sem.up[range_min] not in embedding_images:
            continue
        qf = PrincipalFilter(qsem, mins[0], qsem.all_mask)
        if quotient.pseudo is None or not is_completely_prime(quotient.pseudo, qf):
            return [_fail("nucleus-preserves-prime", filter=f.name())]
    return [_ok("nucleus-image-is-filter"), _ok("nucleus-preserves-prime")]


# -- tight laws --------------------------------------------------------------------

def tight_support_union_law(sem: FiniteInverseSemigroup) -> list[CheckResult]:
    """The support of an element is the union of the supports of any of its
    tight covers."""
    from .tight import tight_filters, tight_supports

    cov = tight_coverage(sem)
    family = tight_filters(sem, cov)
    supports = tight_supports(sem, family)
    for e, fam in cov.covers.items():
        for z in fam:
            u = 0
            for x in bits(z):
                u |= supports[x]
            if u != supports[e]:
                return [_fail("tight-support-union", e=sem.names[e],
                              cover=sem.names_of(z))]
    return [_ok("tight-support-union")]


def tight_filter_avoids_ideal(sem: FiniteInverseSemigroup) -> list[CheckResult]:
    """For a closed ideal and an element outside it there is a tight filter
    holding the element and missing the ideal."""
    from .tight import tight_filters

    cov = tight_coverage(sem)
    family = tight_filters(sem, cov)
    ideals = build_ideal_semigroup(sem)
    for m in ideals.masks:
        if not cov.is_closed(m):
            continue
        for e in bits(sem.all_mask & ~m):
            if not any(f.carrier >> e & 1 and f.carrier & m == 0 for f in family):
                return [_fail("tight-filter-avoids-ideal",
                              ideal=sem.names_of(m), e=sem.names[e])]
    return [_ok("tight-filter-avoids-ideal")]


def patch_basis_adequacy(sem: FiniteInverseSemigroup,
                         limit: int = 12) -> list[CheckResult]:
    """The reduced patch basis (cutting only maximal predecessors) generates
    the same topology as the full family of finite-exclusion sets."""
    from .groupoids import filter_groupoid
    from .topology import generate_topology

    if max(sem.down[s].bit_count() for s in range(len(sem))) > limit:
        raise SizeLimit("full patch basis is too large to enumerate")
    G, filters = filter_groupoid(sem, "patch")
    full_basis = []
    for s in range(len(sem)):
        u_s = mask_of(i for i, f in enumerate(filters) if f.carrier >> s & 1)
        below = sem.down[s] & ~(1 << s)
        for excl in subsets_of(below):
            cut = u_s
            for t in bits(excl):
                cut &= ~mask_of(i for i, f in enumerate(filters)
                                if f.carrier >> t & 1)
            full_basis.append(cut)
    full = generate_topology(len(filters), full_basis)
    if full.opens != G.topology.opens:
        return [_fail("patch-basis-adequacy")]
    return [_ok("patch-basis-adequacy")]
