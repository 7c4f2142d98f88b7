import pytest

from isg.bitset import bits, mask_of
from isg.errors import DomainMismatch, NotAPseudogroup
from isg.filters import (
    enumerate_filters,
    filter_at,
    filter_from_germ_data,
    germ,
    is_completely_prime,
    range_filter,
    ultrafilters,
)
from isg.groupoids import bisections, pair_groupoid
from isg.ideals import Nucleus, apply_nucleus_quotient, as_frame, as_pseudogroup
from isg.properties import filter_enumeration_oracle, germ_lemma_suite
from isg.coverages import tight_coverage
from isg.ideals import nucleus_from_coverage

from conftest import i2_elt


def test_filter_counts(e4, i2, z2):
    assert sorted(enumerate_filters(e4).names()) == ["1", "a", "b"]
    assert len(enumerate_filters(i2)) == 6
    # the group order is trivial, so both singletons are proper filters
    assert sorted(enumerate_filters(z2).names()) == ["e", "g"]


def test_enumeration_matches_subset_oracle(small_fixtures):
    for name, sem in small_fixtures.items():
        for result in filter_enumeration_oracle(sem):
            assert result.passed, (name, result.witness)
        for result in filter_enumeration_oracle(sem, sem.idem_mask):
            assert result.passed, (name, result.witness)


def test_ultrafilters(e4, chain3, i2):
    assert sorted(ultrafilters(e4).names()) == ["a", "b"]
    assert ultrafilters(chain3).names() == ["c1"]
    esem, _ = i2.idempotent_semilattice()
    assert sorted(ultrafilters(esem).names()) == ["e1", "e2"]


def test_filter_at_rejects_improper(e4):
    with pytest.raises(DomainMismatch):
        filter_at(e4, e4.zero)


def test_germ_of_semilattice_element_is_the_filter(e4):
    one = e4.index("1")
    F = filter_at(e4, e4.index("a"), within=e4.idem_mask)
    for s in bits(F.carrier):
        assert germ(e4, F, s).carrier == F.carrier


def test_germ_example_in_i2(i2):
    F = filter_at(i2, i2_elt(i2, "e1"), within=i2.idem_mask)
    g = germ(i2, F, i2_elt(i2, "t21"))
    assert g.min == i2_elt(i2, "t21")
    assert g.carrier == i2.up[i2_elt(i2, "t21")]


def test_germ_requires_range_idempotent_in_filter(i2):
    F = filter_at(i2, i2_elt(i2, "e1"), within=i2.idem_mask)
    with pytest.raises(DomainMismatch):
        germ(i2, F, i2_elt(i2, "t12"))   # t12 t12^-1 = e2 is not above e1


def test_germ_contains_all_translates(i2):
    F = filter_at(i2, i2_elt(i2, "e2"), within=i2.idem_mask)
    s = i2_elt(i2, "t12")
    g = germ(i2, F, s)
    for f in bits(F.carrier):
        assert i2.m(f, s) in g


def test_germ_lemma_suite(e4, i2, i3, chain3, chain4):
    for sem in (e4, i2, i3, chain3, chain4):
        for result in germ_lemma_suite(sem):
            assert result.passed, (result.name, result.witness)


def test_range_filter_recovers_filter_via_germs(i2):
    for A in enumerate_filters(i2):
        F = range_filter(i2, A)
        for a in bits(A.carrier):
            assert germ(i2, F, a).carrier == A.carrier


def test_filter_from_germ_data_identity_nucleus(i2):
    sem = i2
    nu = Nucleus(sem, tuple(range(len(sem)))).validate()
    quotient = apply_nucleus_quotient(sem, nu, check=False)
    A = filter_at(quotient.sem, int(quotient.project[i2_elt(i2, "t12")]))
    F = filter_from_germ_data(sem, quotient, A)
    assert F.min == i2_elt(i2, "e2")     # t12 * t21 = e2


def test_filter_from_germ_data_matches_preimage(e4):
    ideals, nucleus = nucleus_from_coverage(e4, tight_coverage(e4))
    quotient = apply_nucleus_quotient(ideals.sem, nucleus, check=False)
    qsem = quotient.sem
    for A in enumerate_filters(qsem):
        F = filter_from_germ_data(ideals.sem, quotient, A)
        pre = mask_of(x for x in range(len(ideals.sem))
                      if A.carrier >> int(quotient.project[x]) & 1)
        for a in bits(A.carrier):
            src = int(quotient.inject[a])
            assert germ(ideals.sem, F, src).carrier == pre


def test_completely_prime_on_discrete_frame(e4):
    frame = as_frame(e4)
    top_filter = filter_at(e4, e4.index("1"))
    atom_filter = filter_at(e4, e4.index("a"))
    assert is_completely_prime(frame, atom_filter)
    # the top is the join of the two atoms, neither of which is in its filter
    assert not is_completely_prime(frame, top_filter)


def test_completely_prime_rejects_unvalidated_input(e4):
    with pytest.raises(NotAPseudogroup):
        is_completely_prime(e4, filter_at(e4, e4.index("a")))


def test_completely_prime_in_bisection_pseudogroup():
    bis = bisections(pair_groupoid(2))
    sem = bis.pseudo.sem
    twist = sem.index("{a01,a10}")
    assert not is_completely_prime(bis.pseudo, filter_at(sem, twist))
    single = sem.index("{a01}")
    assert is_completely_prime(bis.pseudo, filter_at(sem, single))


def test_completely_prime_matches_antichain_oracle(e4, chain3, i2):
    for sem in (e4, chain3, i2):
        pseudo = as_pseudogroup(sem) if sem is i2 else as_frame(sem)
        for f in enumerate_filters(sem):
            brute = True
            for anti in sem.compatible_antichains():
                j = sem.join_of(anti)
                if j is not None and f.carrier >> j & 1 and not anti & f.carrier:
                    brute = False
                    break
            assert is_completely_prime(pseudo, f) == brute


def test_join_irreducible_minimum_gives_prime_filter(e4):
    frame = as_frame(e4)
    for f in enumerate_filters(e4):
        reducible = any(
            e4.join_of(anti) == f.min and not anti & (1 << f.min)
            for anti in e4.compatible_antichains())
        if not reducible:
            assert is_completely_prime(frame, f)
