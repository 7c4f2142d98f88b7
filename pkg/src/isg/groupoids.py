"""Finite groupoids with explicit topologies.

Covers the groupoid of filters of an inverse semigroup (with the element and
patch topologies), bisection pseudogroups, the groupoid of completely prime
filters of a pseudogroup, spectra of finite frames, sobriety, reductions,
subspaces cut out by coverages, and the embedding induced by a nucleus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bitset import bits, is_subset, mask_of
from .coverages import AmbientJoins, Coverage, union as coverage_union
from .errors import (
    NoZero,
    NotAFrame,
    NotEtale,
    NotT1Sober,
    ValidationError,
)
from .filters import PrincipalFilter, enumerate_filters, is_completely_prime
from .ideals import (
    Nucleus,
    NucleusQuotient,
    Pseudogroup,
    apply_nucleus_quotient,
    as_pseudogroup,
)
from .semigroups import FiniteInverseSemigroup, from_op
from .topology import FiniteTopology, discrete_topology, generate_topology


class FiniteGroupoid:
    """Arrows 0..n-1 with a partial product, an involution, and a topology.

    mul[i, j] is -1 exactly when the pair is not composable, which must agree
    with d(i) == r(j).
    """

    def __init__(self, labels: Sequence[str], mul: np.ndarray, inv: np.ndarray,
                 topology: FiniteTopology, *, validate: bool = True):
        self.labels = tuple(labels)
        self.mul = mul
        self.inv = inv
        self.topology = topology
        n = len(self.labels)
        self.d = np.asarray([mul[inv[g], g] for g in range(n)], dtype=np.int32)
        self.r = np.asarray([mul[g, inv[g]] for g in range(n)], dtype=np.int32)
        self.units_mask = mask_of(int(u) for u in set(self.d) | set(self.r))
        for a in (self.mul, self.inv, self.d, self.r):
            a.flags.writeable = False
        if validate:
            failures = validate_groupoid(self)
            if failures:
                kind, witness = failures[0]
                raise ValidationError(f"groupoid axiom {kind} fails",
                                      witness=witness)

    def __len__(self) -> int:
        return len(self.labels)

    def composable(self, f: int, g: int) -> bool:
        return int(self.mul[f, g]) >= 0

    def m(self, f: int, g: int) -> int:
        p = int(self.mul[f, g])
        if p < 0:
            raise ValueError(f"arrows {self.labels[f]}, {self.labels[g]} do not compose")
        return p

    def unit_indices(self) -> list[int]:
        return list(bits(self.units_mask))

    def __repr__(self) -> str:
        return (f"FiniteGroupoid({len(self)} arrows, "
                f"{len(list(bits(self.units_mask)))} units)")


def validate_groupoid(G: FiniteGroupoid) -> list:
    """All groupoid axioms plus agreement of composability with d and r."""
    out = []
    n = len(G)
    mul, inv, d, r = G.mul, G.inv, G.d, G.r

    def w(*arrows):
        return {"arrows": [G.labels[a] for a in arrows]}

    for g in range(n):
        if int(inv[inv[g]]) != g:
            out.append(("involution", w(g)))
        if not G.composable(g, int(inv[g])):
            out.append(("arrow-times-inverse", w(g)))
    for f in range(n):
        for g in range(n):
            if G.composable(f, g) != (int(d[f]) == int(r[g])):
                out.append(("composability-vs-d-r", w(f, g)))
            if not G.composable(f, g):
                continue
            fg = G.m(f, g)
            if G.m(f, G.m(g, int(inv[g]))) != f:
                out.append(("right-unit-law", w(f, g)))
            if G.m(G.m(int(inv[f]), f), g) != g:
                out.append(("left-unit-law", w(f, g)))
            for h in range(n):
                if G.composable(g, h):
                    if not (G.composable(fg, h) and G.composable(f, G.m(g, h))):
                        out.append(("associativity-composable", w(f, g, h)))
                    elif G.m(fg, h) != G.m(f, G.m(g, h)):
                        out.append(("associativity", w(f, g, h)))
    return out


def relative_opens_of(G: FiniteGroupoid, subset_mask: int) -> frozenset:
    return frozenset(o & subset_mask for o in G.topology.opens)


def check_topological(G: FiniteGroupoid) -> list:
    """Continuity of the product and the inverse for the stored topology."""
    out = []
    top = G.topology
    inv_issues = [o for o in top.opens
                  if mask_of(int(G.inv[x]) for x in bits(o)) not in top.opens]
    if inv_issues:
        out.append(("inverse-continuity",
                    {"open": _arrow_names(G, inv_issues[0])}))
    minn = [top.minimal_neighborhood(x) for x in range(len(G))]
    for f in range(len(G)):
        for g in range(len(G)):
            if not G.composable(f, g):
                continue
            target = minn[G.m(f, g)]
            for f2 in bits(minn[f]):
                for g2 in bits(minn[g]):
                    if G.composable(f2, g2) and not target >> G.m(f2, g2) & 1:
                        out.append(("product-continuity",
                                    {"arrows": [G.labels[f], G.labels[g]]}))
                        break
                else:
                    continue
                break
    return out


def check_etale(G: FiniteGroupoid) -> list:
    """Basis opens must be bisections carried homeomorphically onto open
    subsets of the unit space by both d and r."""
    out = check_topological(G)
    top = G.topology
    unit_rel_opens = relative_opens_of(G, G.units_mask)
    if G.units_mask not in top.opens:
        out.append(("units-open", {}))
    for which, proj in (("d", G.d), ("r", G.r)):
        for b in top.basis:
            seen = {}
            for x in bits(b):
                u = int(proj[x])
                if u in seen:
                    out.append((f"{which}-injective-on-basis",
                                {"open": [G.labels[i] for i in bits(b)]}))
                    break
                seen[u] = x
            else:
                image = mask_of(seen.keys())
                if image not in unit_rel_opens:
                    out.append((f"{which}-open-image", {
                        "open": [G.labels[i] for i in bits(b)]}))
                    continue
                for o in top.opens:
                    im = mask_of(int(proj[x]) for x in bits(b & o))
                    if im not in unit_rel_opens:
                        out.append((f"{which}-local-inverse-continuity", {
                            "open": [G.labels[i] for i in bits(b)]}))
                        break
    return out


def require_etale(G: FiniteGroupoid):
    failures = check_etale(G)
    if failures:
        kind, witness = failures[0]
        raise NotEtale(f"etale check {kind} fails", witness=witness)


# -- constructions -----------------------------------------------------------

def _filter_arrow_data(sem: FiniteInverseSemigroup, adjoin_improper: bool):
    if sem.zero is None and not adjoin_improper:
        raise NoZero("filter groupoid needs a zero "
                     "(or the improper filter adjoined explicitly)")
    filters = list(enumerate_filters(sem))
    mins = [f.min for f in filters]
    labels = [f.name() for f in filters]
    improper = None
    if sem.zero is None and adjoin_improper:
        improper = len(filters)
        labels.append("<all>")

    n = len(labels)
    dom = {}
    ran = {}
    for i, m in enumerate(mins):
        dom[i] = sem.m(int(sem.inv[m]), m)
        ran[i] = sem.m(m, int(sem.inv[m]))
    index_of_min = {m: i for i, m in enumerate(mins)}
    mul = np.full((n, n), -1, dtype=np.int32)
    inv = np.empty(n, dtype=np.int32)
    for i, m in enumerate(mins):
        inv[i] = index_of_min[int(sem.inv[m])]
        for j, k in enumerate(mins):
            if dom[i] == ran[j]:
                mul[i, j] = index_of_min[sem.m(m, k)]
    if improper is not None:
        inv[improper] = improper
        mul[improper, improper] = improper
    return filters, labels, mul, inv, improper


def filter_groupoid(sem: FiniteInverseSemigroup, topology_kind: str = "patch",
                    *, adjoin_improper: bool = False,
                    open_cap: int = 1 << 16) -> tuple[FiniteGroupoid, list[PrincipalFilter]]:
    """The groupoid of filters, with arrows the principal filters, product
    lifting the element product, and the chosen topology.

    For semigroups without zero the improper filter (the whole semigroup) is
    admitted as an isolated extra unit only on request.
    """
    filters, labels, mul, inv, improper = _filter_arrow_data(sem, adjoin_improper)
    basis = _filter_basis(sem, filters, improper, topology_kind, len(labels))
    top = generate_topology(len(labels), basis, labels, cap=open_cap)
    G = FiniteGroupoid(labels, mul, inv, top)
    return G, filters


def _filter_basis(sem, filters, improper, kind, n_arrows):
    def u_set(s: int) -> int:
        out = 0
        for i, f in enumerate(filters):
            if f.carrier >> s & 1:
                out |= 1 << i
        if improper is not None:
            out |= 1 << improper
        return out

    basis = [u_set(s) for s in range(len(sem))]
    if kind == "tau":
        return basis
    if kind != "patch":
        raise ValidationError(f"unknown topology kind {kind!r}")
    for s in range(len(sem)):
        below = sem.down[s] & ~(1 << s)
        maximals = [t for t in bits(below)
                    if not (sem.up[t] & below & ~(1 << t))]
        cut = u_set(s)
        for t in maximals:
            cut &= ~u_set(t)
        basis.append(cut)
    return basis


def pair_groupoid(n: int) -> FiniteGroupoid:
    """The pair groupoid on n points with the discrete topology."""
    arrows = [(i, j) for i in range(n) for j in range(n)]
    pos = {a: k for k, a in enumerate(arrows)}
    labels = [f"u{i}" if i == j else f"a{i}{j}" for i, j in arrows]
    size = len(arrows)
    mul = np.full((size, size), -1, dtype=np.int32)
    inv = np.empty(size, dtype=np.int32)
    for k, (i, j) in enumerate(arrows):
        inv[k] = pos[(j, i)]
        for l, (i2, j2) in enumerate(arrows):
            if j == i2:
                mul[k, l] = pos[(i, j2)]
    return FiniteGroupoid(labels, mul, inv, discrete_topology(size, labels))


def space_as_groupoid(top: FiniteTopology) -> FiniteGroupoid:
    """A topological space seen as a groupoid of units."""
    n = top.n_points
    mul = np.full((n, n), -1, dtype=np.int32)
    for i in range(n):
        mul[i, i] = i
    inv = np.arange(n, dtype=np.int32)
    return FiniteGroupoid(top.labels, mul, inv, top)


def reduce_groupoid(G: FiniteGroupoid, units_keep_mask: int
                    ) -> tuple[FiniteGroupoid, np.ndarray]:
    """The reduction to a subset of the units: arrows whose source and target
    both lie there, with the subspace topology.

    Returns the reduced groupoid and the map from new arrow indices to old.
    """
    if not is_subset(units_keep_mask, G.units_mask):
        raise ValidationError("reduction subset must consist of units")
    keep = [g for g in range(len(G))
            if units_keep_mask >> int(G.d[g]) & 1 and units_keep_mask >> int(G.r[g]) & 1]
    pos = {g: i for i, g in enumerate(keep)}
    size = len(keep)
    mul = np.full((size, size), -1, dtype=np.int32)
    inv = np.empty(size, dtype=np.int32)
    for i, g in enumerate(keep):
        inv[i] = pos[int(G.inv[g])]
        for j, h in enumerate(keep):
            if G.composable(g, h):
                mul[i, j] = pos[G.m(g, h)]
    top = G.topology.subspace(mask_of(keep), [G.labels[g] for g in keep])
    H = FiniteGroupoid([G.labels[g] for g in keep], mul, inv, top)
    return H, np.asarray(keep, dtype=np.int32)


# -- bisections ---------------------------------------------------------------

@dataclass
class BisectionPseudogroup:
    pseudo: Pseudogroup
    masks: tuple[int, ...]          # element index -> arrow mask
    index: dict

    def mask_label(self, mask: int) -> str:
        return self.pseudo.sem.names[self.index[mask]]


def bisections(G: FiniteGroupoid, *, check: bool = True) -> BisectionPseudogroup:
    """All open bisections under the setwise product; a pseudogroup with
    zero the empty bisection and identity the unit space."""
    require_etale(G)
    masks = sorted(o for o in G.topology.opens if _is_bisection(G, o))
    pos = {m: i for i, m in enumerate(masks)}
    if G.units_mask not in pos:
        raise NotEtale("unit space is not an open bisection")

    def product(i: int, j: int) -> int:
        out = 0
        for f in bits(masks[i]):
            for g in bits(masks[j]):
                if G.composable(f, g):
                    out |= 1 << G.m(f, g)
        if out not in pos:
            raise NotEtale("product of open bisections is not one",
                           witness={"left": _arrow_names(G, masks[i]),
                                    "right": _arrow_names(G, masks[j])})
        return pos[out]

    names = ["{" + ",".join(_arrow_names(G, m)) + "}" for m in masks]
    sem = from_op(names, product)
    pseudo = as_pseudogroup(sem, check=check)
    return BisectionPseudogroup(pseudo, tuple(masks), pos)


def _is_bisection(G: FiniteGroupoid, mask: int) -> bool:
    for proj in (G.d, G.r):
        seen = set()
        for x in bits(mask):
            u = int(proj[x])
            if u in seen:
                return False
            seen.add(u)
    return True


def _arrow_names(G: FiniteGroupoid, mask: int) -> list[str]:
    return [G.labels[i] for i in bits(mask)]


# -- groupoids of completely prime filters ------------------------------------

def prime_filter_groupoid(pseudo: Pseudogroup) -> tuple[FiniteGroupoid, list[PrincipalFilter]]:
    """The groupoid of completely prime filters of a pseudogroup, topologised
    by the sets of filters containing a fixed element."""
    sem = pseudo.sem
    cps = [f for f in enumerate_filters(sem) if is_completely_prime(pseudo, f)]
    mins = [f.min for f in cps]
    pos = {m: i for i, m in enumerate(mins)}
    n = len(mins)
    labels = [sem.names[m] for m in mins]
    mul = np.full((n, n), -1, dtype=np.int32)
    inv = np.empty(n, dtype=np.int32)
    for i, m in enumerate(mins):
        im = int(sem.inv[m])
        assert im in pos, "inverse of a completely prime filter lost primality"
        inv[i] = pos[im]
        for j, k in enumerate(mins):
            if sem.m(im, m) == sem.m(k, int(sem.inv[k])):
                p = sem.m(m, k)
                assert p in pos, "product of completely prime filters lost primality"
                mul[i, j] = pos[p]
    basis = []
    for s in range(len(sem)):
        basis.append(mask_of(i for i, f in enumerate(cps) if f.carrier >> s & 1))
    top = generate_topology(n, basis, labels)
    return FiniteGroupoid(labels, mul, inv, top), cps


def spectrum(frame: Pseudogroup) -> tuple[FiniteTopology, list[PrincipalFilter]]:
    """The spectrum of a finite frame: completely prime filters with the
    topology generated by the supports of frame elements."""
    if not frame.is_frame():
        raise NotAFrame("spectrum needs an idempotent pseudogroup")
    G, cps = prime_filter_groupoid(frame)
    return G.topology, cps


# -- sobriety ------------------------------------------------------------------

@dataclass
class SobrietyReport:
    sober: bool
    eta: Optional[np.ndarray]
    failures: list = field(default_factory=list)


def eta_map(G: FiniteGroupoid, bis: BisectionPseudogroup,
            target: FiniteGroupoid, target_filters) -> tuple[Optional[np.ndarray], list]:
    sem = bis.pseudo.sem
    pos_by_min = {f.min: i for i, f in enumerate(target_filters)}
    failures = []
    eta = np.full(len(G), -1, dtype=np.int32)
    for g in range(len(G)):
        containing = [i for i, m in enumerate(bis.masks) if m >> g & 1]
        if not containing:
            failures.append(("no-bisection-neighborhood", {"arrow": G.labels[g]}))
            continue
        meet = bis.masks[containing[0]]
        for i in containing[1:]:
            meet &= bis.masks[i]
        if meet not in bis.index:
            failures.append(("filter-not-principal", {"arrow": G.labels[g]}))
            continue
        m = bis.index[meet]
        if m not in pos_by_min:
            failures.append(("filter-not-completely-prime", {"arrow": G.labels[g]}))
            continue
        eta[g] = pos_by_min[m]
    return (None, failures) if failures else (eta, [])


def sobriety_report(G: FiniteGroupoid, *, check_pseudogroup: bool = True) -> SobrietyReport:
    """Whether the canonical map into the groupoid of completely prime
    filters of the bisection pseudogroup is a homeomorphism."""
    bis = bisections(G, check=check_pseudogroup)
    target, tfilters = prime_filter_groupoid(bis.pseudo)
    eta, failures = eta_map(G, bis, target, tfilters)
    if failures:
        return SobrietyReport(False, None, failures)
    vals = {int(v) for v in eta}
    if len(vals) != len(G):
        failures.append(("eta-not-injective", {}))
    if vals != set(range(len(target))):
        failures.append(("eta-not-surjective", {}))
    for f in range(len(G)):
        for g in range(len(G)):
            if G.composable(f, g) != target.composable(int(eta[f]), int(eta[g])):
                failures.append(("eta-composability", {
                    "arrows": [G.labels[f], G.labels[g]]}))
            elif G.composable(f, g) and int(eta[G.m(f, g)]) != target.m(int(eta[f]), int(eta[g])):
                failures.append(("eta-multiplicativity", {
                    "arrows": [G.labels[f], G.labels[g]]}))
    if not failures:
        # basic opens correspond, which settles continuity and openness
        for b, bmask in enumerate(bis.masks):
            v_b = mask_of(i for i, f in enumerate(tfilters)
                          if f.carrier >> bis.index[bmask] & 1)
            pulled = mask_of(g for g in range(len(G)) if v_b >> int(eta[g]) & 1)
            if pulled != bmask:
                failures.append(("eta-basic-open", {
                    "bisection": bis.pseudo.sem.names[b]}))
    return SobrietyReport(not failures, eta, failures)


def is_sober(G: FiniteGroupoid) -> bool:
    return sobriety_report(G).sober


def sober_space_report(top: FiniteTopology) -> SobrietyReport:
    """Sobriety of a space via its unit groupoid.

    The bisections of a space are its opens, a frame by construction, so the
    pseudogroup laws are not re-verified here.
    """
    return sobriety_report(space_as_groupoid(top), check_pseudogroup=False)


# -- embedding from a nucleus ---------------------------------------------------

@dataclass
class EmbeddingReport:
    quotient: NucleusQuotient
    source: FiniteGroupoid
    target: FiniteGroupoid
    arrow_map: np.ndarray
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def nucleus_embedding(pseudo: Pseudogroup, nucleus: Nucleus,
                      *, check: bool = True) -> EmbeddingReport:
    """The groupoid embedding induced by a nucleus: a completely prime filter
    of the quotient pseudogroup maps to its preimage.

    Verifies injectivity, functoriality (with composability reflected both
    ways), continuity, openness onto the image, and closure of the image
    under the range map.
    """
    sem = pseudo.sem
    quotient = apply_nucleus_quotient(sem, nucleus, source_pseudo=pseudo,
                                      check=check)
    source, src_filters = prime_filter_groupoid(quotient.pseudo)
    target, dst_filters = prime_filter_groupoid(pseudo)
    dst_by_min = {f.min: i for i, f in enumerate(dst_filters)}
    failures = []

    arrow_map = np.full(len(source), -1, dtype=np.int32)
    preimages = []
    for i, f in enumerate(src_filters):
        carrier = f.carrier
        pre = mask_of(x for x in range(len(sem))
                      if carrier >> int(quotient.project[x]) & 1)
        preimages.append(pre)
        m = _mask_minimum(sem, pre)
        if m is None or sem.up[m] != pre or m not in dst_by_min:
            failures.append(("preimage-not-prime-filter", {"filter": f.name()}))
            continue
        arrow_map[i] = dst_by_min[m]
    if failures:
        return EmbeddingReport(quotient, source, target, arrow_map, failures)

    if len({int(v) for v in arrow_map}) != len(source):
        failures.append(("not-injective", {}))
    for i in range(len(source)):
        for j in range(len(source)):
            src_comp = source.composable(i, j)
            dst_comp = target.composable(int(arrow_map[i]), int(arrow_map[j]))
            if src_comp != dst_comp:
                failures.append(("composability-mismatch", {
                    "arrows": [source.labels[i], source.labels[j]]}))
            elif src_comp and int(arrow_map[source.m(i, j)]) != \
                    target.m(int(arrow_map[i]), int(arrow_map[j])):
                failures.append(("not-multiplicative", {
                    "arrows": [source.labels[i], source.labels[j]]}))
        if int(arrow_map[int(source.inv[i])]) != int(target.inv[int(arrow_map[i])]):
            failures.append(("inverse-mismatch", {"arrow": source.labels[i]}))

    # continuity: the preimage of a basic open is basic
    nu = nucleus.image
    for x in range(len(sem)):
        want = mask_of(i for i in range(len(source))
                       if src_filters[i].carrier >> int(quotient.project[nu[x]]) & 1)
        got = mask_of(i for i in range(len(source))
                      if dst_filters[int(arrow_map[i])].carrier >> x & 1)
        if want != got:
            failures.append(("not-continuous", {"element": sem.names[x]}))
            break
    # openness onto the image
    image_mask = mask_of(int(v) for v in arrow_map)
    for a in quotient.inject:
        src_open = mask_of(i for i in range(len(source))
                           if src_filters[i].carrier >> int(quotient.project[int(a)]) & 1)
        pushed = mask_of(int(arrow_map[i]) for i in bits(src_open))
        dst_open = mask_of(j for j in range(len(target))
                           if dst_filters[j].carrier >> int(a) & 1)
        if pushed != dst_open & image_mask:
            failures.append(("not-open-onto-image", {"element": sem.names[int(a)]}))
            break
    # the image is closed under the range map, both ways, and an arrow whose
    # range lies in the image is recovered from its nucleus image
    src_by_min = {f.min: i for i, f in enumerate(src_filters)}
    for j in range(len(target)):
        rj = int(target.r[j])
        if bool(image_mask >> j & 1) != bool(image_mask >> rj & 1):
            failures.append(("image-not-range-closed", {"arrow": target.labels[j]}))
        elif image_mask >> rj & 1:
            nu_image = mask_of(int(quotient.project[x])
                               for x in bits(dst_filters[j].carrier))
            mins = [m for m in bits(nu_image)
                    if nu_image & ~quotient.sem.up[m] == 0]
            if len(mins) != 1 or mins[0] not in src_by_min or \
                    int(arrow_map[src_by_min[mins[0]]]) != j:
                failures.append(("range-closure-reconstruction",
                                 {"arrow": target.labels[j]}))
    return EmbeddingReport(quotient, source, target, arrow_map, failures)


def _mask_minimum(sem: FiniteInverseSemigroup, mask: int) -> Optional[int]:
    for m in bits(mask):
        if mask & ~sem.up[m] == 0:
            return m
    return None


# -- subspaces from coverages ----------------------------------------------------

def subspace_from_coverage(top: FiniteTopology, basis_sem: FiniteInverseSemigroup,
                           basis_masks: Sequence[int], cov: Coverage) -> int:
    """Points surviving the relations a coverage imposes on a basis.

    On a T1 (hence discrete) sober space a point survives when, for every
    basic open U it lies in, every cover of U contains a basic open holding
    the point.  Otherwise the subspace is computed on the spectrum side by
    pushing the coverage to a nucleus on the topology and pulling the
    quotient's points back.
    """
    if cov.base is not basis_sem:
        raise ValidationError("coverage does not live on the basis semilattice")
    mask_by_elt = list(basis_masks)
    for i in range(len(basis_sem)):
        for j in range(len(basis_sem)):
            if mask_by_elt[basis_sem.m(i, j)] != mask_by_elt[i] & mask_by_elt[j]:
                raise ValidationError(
                    "basis semilattice does not realize intersections")
        if not top.is_open(mask_by_elt[i]):
            raise ValidationError("basis set is not open")
    if not sober_space_report(top).sober:
        raise NotT1Sober("space is not sober")
    if top.is_t1():
        kept = 0
        for x in range(top.n_points):
            ok = True
            for u, z_mask in cov.pairs():
                if not mask_by_elt[u] >> x & 1:
                    continue
                if not any(mask_by_elt[v] >> x & 1 for v in bits(z_mask)):
                    ok = False
                    break
            if ok:
                kept |= 1 << x
        return kept
    return _subspace_via_spectrum(top, basis_sem, mask_by_elt, cov)


def _subspace_via_spectrum(top, basis_sem, basis_masks, cov) -> int:
    if len(set(basis_masks)) != len(basis_masks):
        raise ValidationError("basis sets must be distinct")
    opens = sorted(top.opens)
    pos = {o: k for k, o in enumerate(opens)}
    frame_sem = from_op([f"O{k}" for k in range(len(opens))],
                        lambda i, j: pos[opens[i] & opens[j]],
                        assume_associative=True)
    frame = as_pseudogroup(frame_sem, check=False)
    embed = tuple(pos[m] for m in basis_masks)
    joined = coverage_union(
        Coverage(basis_sem, dict(cov.covers)),
        Coverage(basis_sem, {}, AmbientJoins(frame, embed)))
    from .ideals import close_mask

    mu = []
    for u in opens:
        seed = mask_of(i for i, m in enumerate(basis_masks) if is_subset(m, u))
        closed = close_mask(joined, seed)
        total = 0
        for i in bits(closed):
            total |= basis_masks[i]
        mu.append(pos[total])
    quotient = apply_nucleus_quotient(frame_sem, Nucleus(frame_sem, tuple(mu)),
                                      source_pseudo=frame)
    qG, q_filters = prime_filter_groupoid(quotient.pseudo)
    kept = 0
    for x in range(top.n_points):
        nbhd = mask_of(k for k, o in enumerate(opens) if o >> x & 1)
        for f in q_filters:
            pre = mask_of(k for k in range(len(opens))
                          if f.carrier >> int(quotient.project[mu[k]]) & 1)
            if pre == nbhd:
                kept |= 1 << x
                break
    return kept


# -- isomorphism ------------------------------------------------------------------

def find_isomorphism(G: FiniteGroupoid, H: FiniteGroupoid,
                     *, topological: bool = True) -> Optional[np.ndarray]:
    """An arrow bijection preserving composability, products, inverses and,
    when requested, open sets; None when no isomorphism exists.

    Arrows are matched within (d-class, r-class) blocks after a unit
    matching, so no general graph search is needed at these sizes.
    """
    if len(G) != len(H) or len(list(bits(G.units_mask))) != len(list(bits(H.units_mask))):
        return None

    def profile(K: FiniteGroupoid, u: int):
        ins = sum(1 for g in range(len(K)) if int(K.r[g]) == u)
        outs = sum(1 for g in range(len(K)) if int(K.d[g]) == u)
        loops = sum(1 for g in range(len(K)) if int(K.d[g]) == u and int(K.r[g]) == u)
        return ins, outs, loops

    g_units = sorted(bits(G.units_mask))
    h_units = sorted(bits(H.units_mask))
    h_by_profile: dict = {}
    for u in h_units:
        h_by_profile.setdefault(profile(H, u), []).append(u)

    from itertools import permutations

    def unit_assignments():
        groups: dict = {}
        for u in g_units:
            groups.setdefault(profile(G, u), []).append(u)
        if sorted(groups) != sorted(h_by_profile) or any(
                len(groups[p]) != len(h_by_profile[p]) for p in groups):
            return
        keys = sorted(groups)
        pools = [permutations(h_by_profile[p]) for p in keys]
        from itertools import product as iproduct
        for combo in iproduct(*pools):
            out = {}
            for p, perm in zip(keys, combo):
                out.update(dict(zip(groups[p], perm)))
            yield out

    for unit_map in unit_assignments():
        block: dict = {}
        for h in range(len(H)):
            block.setdefault((int(H.d[h]), int(H.r[h])), []).append(h)
        ok = True
        choices = []
        for g in range(len(G)):
            key = (unit_map[int(G.d[g])], unit_map[int(G.r[g])])
            if key not in block:
                ok = False
                break
            choices.append(block[key])
        if not ok:
            continue
        phi = np.full(len(G), -1, dtype=np.int32)
        used = set()

        def rec(g: int) -> bool:
            if g == len(G):
                return _iso_full_check(G, H, phi, topological)
            for h in choices[g]:
                if h in used:
                    continue
                phi[g] = h
                used.add(h)
                if _iso_partial_ok(G, H, phi, g) and rec(g + 1):
                    return True
                used.discard(h)
                phi[g] = -1
            return False

        if rec(0):
            return phi
    return None


def _iso_partial_ok(G, H, phi, upto) -> bool:
    for a in range(upto + 1):
        if int(phi[int(G.inv[a])]) >= 0 and int(phi[int(G.inv[a])]) != int(H.inv[phi[a]]):
            return False
        for b in range(upto + 1):
            if G.composable(a, b):
                if not H.composable(int(phi[a]), int(phi[b])):
                    return False
                c = G.m(a, b)
                if int(phi[c]) >= 0 and int(phi[c]) != H.m(int(phi[a]), int(phi[b])):
                    return False
            elif H.composable(int(phi[a]), int(phi[b])):
                return False
    return True


def _iso_full_check(G, H, phi, topological) -> bool:
    for a in range(len(G)):
        if int(phi[int(G.inv[a])]) != int(H.inv[phi[a]]):
            return False
    if topological:
        mapped = {mask_of(int(phi[x]) for x in bits(o)) for o in G.topology.opens}
        if mapped != set(H.topology.opens):
            return False
    return True


def groupoids_isomorphic(G: FiniteGroupoid, H: FiniteGroupoid,
                         *, topological: bool = True) -> bool:
    return find_isomorphism(G, H, topological=topological) is not None
