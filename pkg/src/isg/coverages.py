"""Coverages: per-element families of covering subsets, closed under
translation.

A coverage assigns to each element a a family of subsets of its lower set;
translation closure means b*X covers b*a and X*b covers a*b whenever X
covers a.  Besides explicit families, a coverage can carry an implicit part
consisting of *all* join decompositions evaluated in an ambient pseudogroup
(that is how "S generates P" relations and induced coverages on frames are
represented without materialising exponentially many covers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional

from .bitset import bits, is_subset, popcount
from .errors import (
    BaseMismatch,
    ConjugationClosureFails,
    NoZero,
    NotDownSet,
    NotHomomorphism,
    NotIdempotentPure,
    SizeLimit,
    ValidationError,
)
from .semigroups import FiniteInverseSemigroup


@dataclass(frozen=True)
class AmbientJoins:
    """Implicit covers: every compatible subset whose join (taken in the
    ambient pseudogroup) lands back on a base element covers that element."""

    ambient: object                 # Pseudogroup; untyped to avoid an import cycle
    embed: tuple[int, ...]          # base index -> ambient index

    def __post_init__(self):
        object.__setattr__(self, "_back",
                           {e: i for i, e in enumerate(self.embed)})

    def join_in_base(self, base_mask: int) -> Optional[int]:
        amb = self.ambient.sem
        m = 0
        for i in bits(base_mask):
            m |= 1 << self.embed[i]
        j = amb.join_of(m)
        if j is None:
            return None
        return self._back.get(j)


class Coverage:
    """Explicit covers per element, with an optional implicit join part."""

    def __init__(self, base: FiniteInverseSemigroup,
                 covers: dict[int, frozenset[int]] | None = None,
                 joins: AmbientJoins | None = None):
        self.base = base
        self.covers: dict[int, frozenset[int]] = {}
        for a, fam in (covers or {}).items():
            fam = frozenset(fam)
            for x_mask in fam:
                if not is_subset(x_mask, base.down[a]):
                    raise NotDownSet(
                        f"cover of {base.names[a]} is not inside its lower set",
                        witness={"of": base.names[a],
                                 "cover": base.names_of(x_mask)})
            if fam:
                self.covers[a] = fam
        self.joins = joins

    def sets(self, a: int) -> frozenset[int]:
        return self.covers.get(a, frozenset())

    def pairs(self) -> Iterator[tuple[int, int]]:
        for a in sorted(self.covers):
            for x_mask in sorted(self.covers[a]):
                yield a, x_mask

    def has(self, a: int, x_mask: int) -> bool:
        if x_mask in self.sets(a):
            return True
        if self.joins is not None and is_subset(x_mask, self.base.down[a]):
            return self.joins.join_in_base(x_mask) == a
        return False

    def forced_element(self, ideal_mask: int) -> Optional[int]:
        """Some element whose cover sits inside the mask but which is missing
        from it, or None when the mask is closed for this coverage."""
        for a, fam in self.covers.items():
            if ideal_mask >> a & 1:
                continue
            for x_mask in fam:
                if is_subset(x_mask, ideal_mask):
                    return a
        if self.joins is not None:
            for a in range(len(self.base)):
                if ideal_mask >> a & 1:
                    continue
                if self.joins.join_in_base(ideal_mask & self.base.down[a]) == a:
                    return a
        return None

    def is_closed(self, ideal_mask: int) -> bool:
        return self.forced_element(ideal_mask) is None

    def __eq__(self, other) -> bool:
        return (isinstance(other, Coverage) and self.base is other.base
                and self.covers == other.covers and self.joins == other.joins)

    def __repr__(self) -> str:
        total = sum(len(f) for f in self.covers.values())
        tag = "+joins" if self.joins else ""
        return f"Coverage({total} explicit covers{tag})"


@dataclass
class CoverageReport:
    is_coverage: bool
    is_strong: bool
    failures: list = field(default_factory=list)


def empty_coverage(sem: FiniteInverseSemigroup) -> Coverage:
    return Coverage(sem, {})


def close_coverage(sem: FiniteInverseSemigroup,
                   seeds: Iterable[tuple[int, int]]) -> Coverage:
    """Smallest coverage containing the seed covers.

    Translates of translates are again one-step translates (q(rX) = (qr)X),
    so a single sweep over two-sided translations reaches the closure.
    """
    out: dict[int, set[int]] = {}
    n = len(sem)
    for a, x_mask in seeds:
        if not is_subset(x_mask, sem.down[a]):
            raise NotDownSet(
                f"seed cover of {sem.names[a]} is not inside its lower set",
                witness={"of": sem.names[a], "cover": sem.names_of(x_mask)})
        for q in (None, *range(n)):
            qa = a if q is None else sem.m(q, a)
            q_x = x_mask if q is None else sem.left_translate(q, x_mask)
            for r in (None, *range(n)):
                qar = qa if r is None else sem.m(qa, r)
                y = q_x if r is None else sem.right_translate(q_x, r)
                out.setdefault(qar, set()).add(y)
    return Coverage(sem, {a: frozenset(f) for a, f in out.items()})


def union(c1: Coverage, c2: Coverage) -> Coverage:
    if c1.base is not c2.base:
        raise BaseMismatch("coverages live on different semigroups")
    joins = c1.joins or c2.joins
    if c1.joins is not None and c2.joins is not None and c1.joins != c2.joins:
        raise BaseMismatch("coverages carry different ambient join rules")
    merged: dict[int, frozenset[int]] = dict(c1.covers)
    for a, fam in c2.covers.items():
        merged[a] = merged.get(a, frozenset()) | fam
    return Coverage(c1.base, merged, joins)


def minimal_covers(cov: Coverage, a: int) -> list[int]:
    fam = sorted(cov.sets(a), key=popcount)
    out: list[int] = []
    for x in fam:
        if not any(is_subset(y, x) for y in out):
            out.append(x)
    return out


def _family_superset_closed(sem: FiniteInverseSemigroup, a: int,
                            fam: frozenset[int]) -> bool:
    # single-bit extensions suffice by induction
    for x in fam:
        for y in bits(sem.down[a] & ~x):
            if x | 1 << y not in fam:
                return False
    return True


def check_axioms(cov: Coverage, *, t_budget: int = 1_000_000) -> CoverageReport:
    """Report the translation-closure axiom and the strong axioms R, I, MS, T.

    Only the explicit part is examined; the implicit join part is translation
    closed because ambient products distribute over joins.
    """
    sem = cov.base
    failures = []
    n = len(sem)

    def note(axiom, **w):
        shown = {k: sem.names_of(v) if k in ("cover", "union") and isinstance(v, int)
                 else v for k, v in w.items()}
        failures.append((axiom, shown))

    for a, x_mask in cov.pairs():
        for b in range(n):
            if not cov.has(sem.m(b, a), sem.left_translate(b, x_mask)):
                note("translation", of=sem.names[a], by=sem.names[b],
                     cover=x_mask, side="left")
            if not cov.has(sem.m(a, b), sem.right_translate(x_mask, b)):
                note("translation", of=sem.names[a], by=sem.names[b],
                     cover=x_mask, side="right")
    is_coverage = not failures

    for a in range(n):
        if not cov.has(a, 1 << a):
            note("R", of=sem.names[a])
            break
    for a, x_mask in cov.pairs():
        if not cov.has(int(sem.inv[a]), sem.inv_mask(x_mask)):
            note("I", of=sem.names[a], cover=x_mask)
    pair_list = list(cov.pairs())
    for a, x_mask in pair_list:
        for b, y_mask in pair_list:
            if not cov.has(sem.m(a, b), sem.product_mask(x_mask, y_mask)):
                note("MS", of=f"{sem.names[a]}*{sem.names[b]}", cover=x_mask)
    _check_t(cov, note, t_budget)

    return CoverageReport(is_coverage, not failures, failures)


def _check_t(cov: Coverage, note, budget: int):
    sem = cov.base
    reduced = all(_family_superset_closed(sem, a, fam)
                  for a, fam in cov.covers.items())
    fam_of = (lambda a: minimal_covers(cov, a)) if reduced else \
             (lambda a: sorted(cov.sets(a)))
    work = 0
    for a in sorted(cov.covers):
        for x_mask in fam_of(a):
            xs = list(bits(x_mask))
            choices = [fam_of(x) for x in xs]
            size = 1
            for c in choices:
                size *= max(len(c), 1)
            work += size
            if work > budget:
                raise SizeLimit("axiom T check exceeded its budget; "
                                "coverage families are too large")
            if any(not c for c in choices):
                continue
            for pick in product(*choices):
                u = 0
                for m in pick:
                    u |= m
                if not cov.has(a, u):
                    note("T", of=sem.names[a],
                         cover=sem.names_of(x_mask), union=sem.names_of(u))
                    return


def restrict_to_idempotents(cov: Coverage) -> Coverage:
    """Restriction to the idempotent semilattice, reindexed to E(S).

    Covers of an idempotent stay inside E(S) automatically: anything below an
    idempotent is idempotent.
    """
    sem = cov.base
    esem, to_parent = sem.idempotent_semilattice()
    back = {int(p): i for i, p in enumerate(to_parent)}
    covers: dict[int, frozenset[int]] = {}
    for a, fam in cov.covers.items():
        if not sem.is_idempotent(a):
            continue
        covers[back[a]] = frozenset(
            _remap(x_mask, back) for x_mask in fam)
    joins = None
    if cov.joins is not None:
        joins = AmbientJoins(cov.joins.ambient,
                             tuple(cov.joins.embed[int(p)] for p in to_parent))
    return Coverage(esem, covers, joins)


def _remap(mask: int, back: dict[int, int]) -> int:
    out = 0
    for x in bits(mask):
        out |= 1 << back[x]
    return out


def extend_from_idempotents(sem: FiniteInverseSemigroup, cov_e: Coverage) -> Coverage:
    """Inverse of ``restrict_to_idempotents``.

    Requires the conjugation-closure property s X s^-1 covered at s e s^-1;
    the extension covers s by s*X for X covering s^-1 s and by X*s for X
    covering s s^-1.
    """
    esem, to_parent = sem.idempotent_semilattice()
    if cov_e.base is not esem:
        raise BaseMismatch("coverage does not live on E(S)")
    if cov_e.joins is not None:
        raise ValidationError("extension of implicit-join coverages is not supported")
    fwd = {i: int(p) for i, p in enumerate(to_parent)}
    back = {int(p): i for i, p in enumerate(to_parent)}

    for e_sub, fam in cov_e.covers.items():
        e = fwd[e_sub]
        for s in range(len(sem)):
            ses = sem.m(sem.m(s, e), int(sem.inv[s]))
            for x_mask in fam:
                x_parent = _remap(x_mask, fwd)
                conj = sem.right_translate(sem.left_translate(s, x_parent),
                                           int(sem.inv[s]))
                if _remap(conj, back) not in cov_e.sets(back[ses]):
                    raise ConjugationClosureFails(
                        "conjugate of a cover is not a cover",
                        witness={"s": sem.names[s], "e": sem.names[e],
                                 "cover": sem.names_of(x_parent)})

    covers: dict[int, set[int]] = {}
    for s in range(len(sem)):
        dom = sem.m(int(sem.inv[s]), s)
        ran = sem.m(s, int(sem.inv[s]))
        fam = covers.setdefault(s, set())
        for x_mask in cov_e.sets(back[dom]):
            fam.add(sem.left_translate(s, _remap(x_mask, fwd)))
        for x_mask in cov_e.sets(back[ran]):
            fam.add(sem.right_translate(_remap(x_mask, fwd), s))
    return Coverage(sem, {a: frozenset(f) for a, f in covers.items() if f})


def tight_coverage(sem: FiniteInverseSemigroup, *,
                   max_cover_size: int | None = None,
                   down_set_limit: int = 20) -> Coverage:
    """The tight coverage: Z covers a when every nonzero b <= a has a lower
    bound in common with some z in Z (other than zero).

    On a semilattice the common-lower-bound test is just b*z != 0; both forms
    agree there and the product form is used.
    """
    import numpy as np

    from . import _accel

    if sem.zero is None:
        raise NoZero("tight coverage needs a zero")
    zero_bit = 1 << sem.zero
    n = len(sem)
    semilat = sem.is_semilattice()
    covers: dict[int, frozenset[int]] = {}
    for a in range(n):
        local = list(bits(sem.down[a]))
        k = len(local)
        if k > down_set_limit:
            raise SizeLimit(
                f"lower set of {sem.names[a]} has {k} elements; "
                f"tight cover enumeration caps at {down_set_limit}")
        conds = []
        for b in local:
            if b == sem.zero:
                continue
            cm = 0
            for pos, z in enumerate(local):
                if semilat:
                    hit = sem.m(b, z) != sem.zero
                else:
                    hit = bool(sem.down[b] & sem.down[z] & ~zero_bit)
                if hit:
                    cm |= 1 << pos
            conds.append(cm)
        hits = _accel.masks_hitting_all(np.asarray(conds, dtype=np.uint64), k)
        fam = set()
        for m in hits:
            m = int(m)
            g = 0
            for pos in bits(m):
                g |= 1 << local[pos]
            if max_cover_size is None or popcount(g) <= max_cover_size:
                fam.add(g)
        covers[a] = frozenset(fam)
    return Coverage(sem, covers)


@dataclass
class CoverToJoinReport:
    cover_to_join: bool
    idempotent_pure: bool
    witness: dict | None = None


def check_homomorphism(src: FiniteInverseSemigroup, theta,
                       dst: FiniteInverseSemigroup):
    for x in range(len(src)):
        for y in range(len(src)):
            if int(theta[src.m(x, y)]) != dst.m(int(theta[x]), int(theta[y])):
                raise NotHomomorphism(
                    f"theta({src.names[x]}*{src.names[y]}) != "
                    f"theta({src.names[x]})*theta({src.names[y]})",
                    witness={"x": src.names[x], "y": src.names[y]})


def is_idempotent_pure_map(src: FiniteInverseSemigroup, theta,
                           dst: FiniteInverseSemigroup) -> bool:
    for x in range(len(src)):
        if dst.is_idempotent(int(theta[x])) and not src.is_idempotent(x):
            return False
    return True


def is_cover_to_join(cov: Coverage, theta, pseudo) -> CoverToJoinReport:
    """Whether theta sends every covering to a join decomposition of its
    target; also reports idempotent-purity of theta."""
    sem = cov.base
    tsem = pseudo.sem
    check_homomorphism(sem, theta, tsem)
    pure = is_idempotent_pure_map(sem, theta, tsem)

    def image_mask(mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= 1 << int(theta[x])
        return out

    for a, x_mask in cov.pairs():
        j = tsem.join_of(image_mask(x_mask))
        if j != int(theta[a]):
            return CoverToJoinReport(False, pure, {
                "of": sem.names[a], "cover": sem.names_of(x_mask)})
    if cov.joins is not None:
        for anti in sem.compatible_antichains():
            a = cov.joins.join_in_base(anti)
            if a is None:
                continue
            if tsem.join_of(image_mask(anti)) != int(theta[a]):
                return CoverToJoinReport(False, pure, {
                    "of": sem.names[a], "cover": sem.names_of(anti)})
    return CoverToJoinReport(True, pure)


def induced_coverage(cov: Coverage, theta, pseudo) -> Coverage:
    """The coverage on a pseudogroup induced by an idempotent-pure
    homomorphism: all join decompositions, plus every translate q*theta(X)*r
    attached to the matching product q*theta(a)*r."""
    sem = cov.base
    tsem = pseudo.sem
    check_homomorphism(sem, theta, tsem)
    if not is_idempotent_pure_map(sem, theta, tsem):
        raise NotIdempotentPure("induced coverage needs an idempotent-pure map")
    if cov.joins is not None:
        raise ValidationError("induced coverage needs an explicit source coverage")

    def image_mask(mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= 1 << int(theta[x])
        return out

    n = len(tsem)
    covers: dict[int, set[int]] = {}

    def add(p: int, y_mask: int):
        covers.setdefault(p, set()).add(y_mask)

    for a, x_mask in cov.pairs():
        ta = int(theta[a])
        ty = image_mask(x_mask)
        add(ta, ty)
        if tsem.is_semilattice():
            # q*y*r = (q*r)*y in a semilattice, one translation loop suffices
            for w in range(n):
                add(tsem.m(w, ta), tsem.left_translate(w, ty))
        else:
            for q in range(n):
                qa, qy = tsem.m(q, ta), tsem.left_translate(q, ty)
                add(qa, qy)
                for r in range(n):
                    add(tsem.m(qa, r), tsem.right_translate(qy, r))
            for r in range(n):
                add(tsem.m(ta, r), tsem.right_translate(ty, r))
    joins = AmbientJoins(pseudo, tuple(range(n)))
    return Coverage(tsem, {a: frozenset(f) for a, f in covers.items()}, joins)
