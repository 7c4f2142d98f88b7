"""Filters, ultrafilters, completely prime filters, and germs.

A filter in a finite poset is down-directed, hence has a minimum and equals
the principal up-set of that minimum; filters are stored by their minimum.
Filters may live in the whole semigroup or in a designated sub-poset (the
idempotent semilattice, mostly), recorded as the ``domain`` mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bitset import bits, is_subset
from .errors import DomainMismatch, NotAPseudogroup
from .semigroups import FiniteInverseSemigroup


@dataclass(frozen=True)
class PrincipalFilter:
    """The filter ↑min inside the sub-poset ``domain`` of ``base``."""

    base: FiniteInverseSemigroup
    min: int
    domain: int

    @property
    def carrier(self) -> int:
        return self.base.up[self.min] & self.domain

    def __contains__(self, x: int) -> bool:
        return bool(self.carrier >> x & 1)

    def name(self) -> str:
        return self.base.names[self.min]

    def __repr__(self) -> str:
        return f"^{self.name()}"


@dataclass(frozen=True)
class FilterFamily:
    filters: tuple[PrincipalFilter, ...]
    kind: str

    def __len__(self) -> int:
        return len(self.filters)

    def __iter__(self):
        return iter(self.filters)

    def mins(self) -> list[int]:
        return [f.min for f in self.filters]

    def names(self) -> list[str]:
        return [f.name() for f in self.filters]


def enumerate_filters(sem: FiniteInverseSemigroup,
                      within: Optional[int] = None) -> FilterFamily:
    """All filters of ``sem`` (or of the sub-poset ``within``).

    In a finite poset these are exactly the proper principal up-sets; the
    subset-definition oracle lives in the tests.
    """
    domain = sem.all_mask if within is None else within
    out = []
    for m in bits(domain):
        if sem.up[m] & domain != domain:
            out.append(PrincipalFilter(sem, m, domain))
    return FilterFamily(tuple(out), "all")


def ultrafilters(sem: FiniteInverseSemigroup,
                 within: Optional[int] = None) -> FilterFamily:
    """Filters maximal under inclusion."""
    fam = enumerate_filters(sem, within)
    out = []
    for f in fam:
        if not any(g.min != f.min and is_subset(f.carrier, g.carrier) for g in fam):
            out.append(f)
    return FilterFamily(tuple(out), "ultra")


def filter_at(sem: FiniteInverseSemigroup, m: int,
              within: Optional[int] = None) -> PrincipalFilter:
    domain = sem.all_mask if within is None else within
    f = PrincipalFilter(sem, m, domain)
    if f.carrier & domain == domain:
        raise DomainMismatch(f"up-set of {sem.names[m]} is not a proper filter")
    return f


def is_completely_prime(pseudo, filt: PrincipalFilter) -> bool:
    """Whether the filter meets every compatible subset whose join it contains.

    In a finite pseudogroup a compatible join folds into pairwise joins, so
    the condition reduces to the binary one; the antichain-based definition
    is kept as a test oracle.
    """
    from .ideals import Pseudogroup

    if not isinstance(pseudo, Pseudogroup):
        raise NotAPseudogroup("expected a validated Pseudogroup")
    sem = pseudo.sem
    if sem is not filt.base:
        raise DomainMismatch("filter does not live in this pseudogroup")
    carrier = filt.carrier
    n = len(sem)
    for a in range(n):
        for b in bits(sem.compat[a] >> a << a):  # pairs with b >= a
            j = pseudo.join_pair(a, b)
            if j is not None and carrier >> j & 1:
                if not (carrier >> a & 1 or carrier >> b & 1):
                    return False
    return True


def germ(sem: FiniteInverseSemigroup, f_filter: PrincipalFilter, s: int) -> PrincipalFilter:
    """The germ of s at a filter of E(S).

    germ = {t | t t^-1 in F and f t = f s for some f in F}; requires
    s s^-1 in F.  The result is always a filter in S.
    """
    carrier = f_filter.carrier
    if not carrier >> sem.m(s, int(sem.inv[s])) & 1:
        raise DomainMismatch(
            f"range idempotent of {sem.names[s]} is outside the filter")
    members = 0
    flist = list(bits(carrier))
    for t in range(len(sem)):
        if not carrier >> sem.m(t, int(sem.inv[t])) & 1:
            continue
        col_t = sem.mul[:, t]
        col_s = sem.mul[:, s]
        if any(col_t[f] == col_s[f] for f in flist):
            members |= 1 << t
    m = _minimum(sem, members)
    assert m is not None and sem.up[m] == members, "germ is not a principal filter"
    return PrincipalFilter(sem, m, sem.all_mask)


def _minimum(sem: FiniteInverseSemigroup, mask: int) -> Optional[int]:
    for m in bits(mask):
        if mask & ~(sem.up[m]) == 0 and mask >> m & 1:
            return m
    return None


def range_filter(sem: FiniteInverseSemigroup, filt: PrincipalFilter) -> PrincipalFilter:
    """For a filter A in S, the filter ↑(A A^-1) in E(S)."""
    a = filt.min
    e = sem.m(a, int(sem.inv[a]))
    return PrincipalFilter(sem, e, sem.idem_mask)


def filter_from_germ_data(sem: FiniteInverseSemigroup, quotient,
                          a_filter: PrincipalFilter) -> PrincipalFilter:
    """Pull a filter of a nucleus quotient back to a filter in E(S).

    ``quotient`` is a NucleusQuotient of ``sem`` and ``a_filter`` a filter in
    its quotient semigroup; the result is the preimage under the nucleus of
    the range filter upstairs, a filter in E(S).
    """
    q = quotient.sem
    if a_filter.base is not q:
        raise DomainMismatch("filter does not live in the quotient")
    prod = q.product_mask(a_filter.carrier, q.inv_mask(a_filter.carrier))
    upstairs = q.up_set(prod) & q.idem_mask
    members = 0
    for x in range(len(sem)):
        if upstairs >> int(quotient.project[x]) & 1:
            members |= 1 << x
    # idempotent-purity of the nucleus keeps the preimage inside E(S)
    assert is_subset(members, sem.idem_mask)
    m = _minimum(sem, members)
    assert m is not None and sem.up[m] & sem.idem_mask == members, \
        "preimage is not a principal filter in E(S)"
    return PrincipalFilter(sem, m, sem.idem_mask)
