import numpy as np
import pytest

from isg.bitset import bits, mask_of
from isg.coverages import Coverage, empty_coverage, tight_coverage
from isg.errors import (
    NotGenerating,
    NucleusAxiomFails,
    PreconditionFailed,
)
from isg.groupoids import bisections, pair_groupoid
from isg.ideals import (
    Nucleus,
    apply_nucleus_quotient,
    as_frame,
    as_pseudogroup,
    build_ideal_semigroup,
    generated_coverage,
    is_pseudogroup,
    nucleus_from_coverage,
    nucleus_on_pseudogroup,
    reconstruction_isomorphism,
    universal_pseudogroup,
    verify_universal_property,
)
from isg.properties import (
    nucleus_oracle,
    nucleus_preserves_prime,
    unit_frame_comparison,
)
from isg.semigroups import from_op
from isg.tight import tight_filter_topology

from conftest import i2_elt


def _names(sem, mask):
    return sorted(sem.names_of(mask))


def test_ideals_of_semilattice_are_down_sets(e4):
    ideals = build_ideal_semigroup(e4)
    got = {frozenset(_names(e4, m)) for m in ideals.masks}
    assert got == {frozenset(s) for s in
                   [{"0"}, {"0", "a"}, {"0", "b"}, {"0", "a", "b"},
                    {"0", "a", "b", "1"}]}


def test_ideals_of_group_include_empty_bottom(z2):
    ideals = build_ideal_semigroup(z2)
    assert sorted(_names(z2, m) for m in ideals.masks) == [[], ["e"], ["g"]]
    assert ideals.sem.zero == ideals.index[0]


def test_ideals_of_i2(i2):
    ideals = build_ideal_semigroup(i2)
    assert len(ideals) == 9
    t12 = i2_elt(i2, "t12")
    assert (1 << i2.zero | 1 << t12) in ideals.index


def test_ideal_semigroup_is_associative(e4, i2):
    from isg import _accel

    for sem in (e4, i2):
        ideals = build_ideal_semigroup(sem)
        assert _accel.assoc_failure(ideals.sem.mul) is None


def test_frames_are_pseudogroups(e4, b3):
    for sem in (e4, b3):
        assert is_pseudogroup(sem).ok


def test_bisection_pseudogroup_check():
    bis = bisections(pair_groupoid(2), check=False)
    assert is_pseudogroup(bis.pseudo.sem).ok


def test_i2_is_a_pseudogroup(i2):
    # every compatible pair of partial bijections has a union, so the
    # exhaustive join search comes back clean
    assert is_pseudogroup(i2).ok


def test_group_without_zero_is_not_a_pseudogroup(z2):
    report = is_pseudogroup(z2)
    assert not report.ok
    assert report.failures[0][0] == "has-zero"


def test_nucleus_from_tight_coverage_on_e4(e4):
    ideals, nucleus = nucleus_from_coverage(e4, tight_coverage(e4))
    zab = mask_of(e4.index(n) for n in ("0", "a", "b"))
    za = mask_of(e4.index(n) for n in ("0", "a"))
    assert ideals.masks[nucleus(ideals.index[zab])] == e4.all_mask
    assert ideals.masks[nucleus(ideals.index[za])] == za


def test_empty_coverage_gives_identity_nucleus(e4, i2):
    for sem in (e4, i2):
        ideals, nucleus = nucleus_from_coverage(sem, empty_coverage(sem))
        assert list(nucleus.image) == list(range(len(ideals)))


def test_nucleus_closure_oracle(small_fixtures):
    from isg.coverages import close_coverage

    for name, sem in small_fixtures.items():
        coverages = [empty_coverage(sem)]
        if sem.zero is not None:
            coverages.append(tight_coverage(sem))
        seed_elt = len(sem) - 1
        coverages.append(close_coverage(sem, [(seed_elt, 1 << seed_elt)]))
        for cov in coverages:
            for result in nucleus_oracle(sem, cov):
                assert result.passed, (name, result.name, result.witness)


def test_nucleus_axioms_rejected_on_bad_map(e4):
    # collapsing everything to zero is not inflationary
    with pytest.raises(NucleusAxiomFails):
        Nucleus(e4, tuple([e4.zero] * len(e4))).validate()


def test_universal_pseudogroup_of_tight_e4(e4):
    up = universal_pseudogroup(e4, tight_coverage(e4))
    masks = {up.element_mask(i) for i in range(len(up.quotient.sem))}
    assert masks == {1 << e4.zero,
                     mask_of(e4.index(n) for n in ("0", "a")),
                     mask_of(e4.index(n) for n in ("0", "b")),
                     e4.all_mask}
    # frame: all four elements idempotent
    assert up.quotient.sem.idem_mask == up.quotient.sem.all_mask


def test_universal_pseudogroup_of_empty_coverage_is_ideal_semigroup(i2):
    up = universal_pseudogroup(i2, empty_coverage(i2))
    assert len(up.quotient.sem) == len(up.ideals)


def test_idempotents_of_tight_universal_i2(i2):
    up = universal_pseudogroup(i2, tight_coverage(i2))
    assert len(up.quotient.sem) == 7
    assert bin(up.quotient.sem.idem_mask).count("1") == 4


def test_unit_frame_comparison(e4, i2, chain3):
    for sem in (e4, i2, chain3):
        for cov in (tight_coverage(sem), empty_coverage(sem)):
            for result in unit_frame_comparison(sem, cov):
                assert result.passed, (result.name, result.witness)


def test_pi_images_generate(e4, i2):
    for sem in (e4, i2):
        up = universal_pseudogroup(sem, tight_coverage(sem))
        qsem = up.quotient.sem
        for i in range(len(qsem)):
            img = mask_of(int(up.pi[a]) for a in bits(up.element_mask(i)))
            assert qsem.join_of(img) == i


def _tau_frame(e4):
    top, family, supports = tight_filter_topology(e4)
    opens = sorted(top.opens)
    pos = {o: k for k, o in enumerate(opens)}
    frame_sem = from_op([f"O{k}" for k in range(len(opens))],
                        lambda i, j: pos[opens[i] & opens[j]],
                        assume_associative=True)
    theta = np.asarray([pos[supports[e]] for e in range(len(e4))],
                       dtype=np.int32)
    return as_pseudogroup(frame_sem), theta, pos, supports


def test_universal_property_of_canonical_map_is_identity(e4):
    up = universal_pseudogroup(e4, tight_coverage(e4))
    res = verify_universal_property(up, up.pi, up.pseudo)
    assert res.factorizes and res.unique
    assert list(res.theta_tilde) == list(range(len(up.quotient.sem)))


def test_universal_property_tight_e4(e4):
    frame, theta, pos, supports = _tau_frame(e4)
    up = universal_pseudogroup(e4, tight_coverage(e4))
    res = verify_universal_property(up, theta, frame)
    assert res.factorizes and res.unique and res.idempotent_pure
    assert res.uniqueness_method == "exhaustive-search"


def test_universal_property_empty_coverage_factors_through_ideals(e4):
    frame, theta, pos, supports = _tau_frame(e4)
    up = universal_pseudogroup(e4, empty_coverage(e4))
    res = verify_universal_property(up, theta, frame)
    assert res.factorizes and res.unique
    zab = mask_of(e4.index(n) for n in ("0", "a", "b"))
    idx = int(up.quotient.project[up.ideals.index[zab]])
    v_one = pos[supports[e4.index("1")]]
    assert int(res.theta_tilde[idx]) == v_one


def test_universal_property_rejects_non_cover_to_join(e4):
    frame, theta, pos, supports = _tau_frame(e4)
    one, a = e4.index("1"), e4.index("a")
    skew = Coverage(e4, {one: frozenset({1 << a})})
    up = universal_pseudogroup(e4, empty_coverage(e4))
    up.coverage.covers.update(skew.covers)
    with pytest.raises(PreconditionFailed):
        verify_universal_property(up, theta, frame)
    up.coverage.covers.clear()


def test_quotient_by_identity_nucleus(i2):
    nu = Nucleus(i2, tuple(range(len(i2)))).validate()
    q = apply_nucleus_quotient(i2, nu, source_pseudo=as_pseudogroup(i2))
    assert len(q.sem) == len(i2)
    assert q.pseudo is not None


def test_quotient_order_and_purity_checks_run(e4):
    ideals, nucleus = nucleus_from_coverage(e4, tight_coverage(e4))
    q = apply_nucleus_quotient(ideals.sem, nucleus,
                               source_pseudo=as_pseudogroup(ideals.sem))
    assert len(q.sem) == 4
    for i in range(len(q.sem)):
        for j in range(len(q.sem)):
            a, b = int(q.inject[i]), int(q.inject[j])
            assert q.sem.le(i, j) == ideals.sem.le(a, b)


def test_nucleus_preserves_prime_filters(e4, i2):
    for sem in (e4, i2):
        ideals, nucleus = nucleus_from_coverage(sem, tight_coverage(sem))
        pseudo = as_pseudogroup(ideals.sem)
        for result in nucleus_preserves_prime(pseudo, nucleus):
            assert result.passed, result.witness


def test_self_generation(e4):
    frame = as_frame(e4)
    sub, embed, cov = generated_coverage(frame, e4.all_mask)
    rec = reconstruction_isomorphism(frame, e4.all_mask)
    assert rec.is_isomorphism


def test_generated_coverage_requires_generation():
    bis = bisections(pair_groupoid(2), check=False)
    sem = bis.pseudo.sem
    units_only = mask_of(i for i, m in enumerate(bis.masks)
                         if all(bis.pseudo.sem.is_idempotent(i) for _ in [0]))
    with pytest.raises(NotGenerating):
        generated_coverage(bis.pseudo, 1 << sem.zero)


def test_reconstruction_of_bisections_from_singletons():
    bis = bisections(pair_groupoid(2), check=False)
    singles = mask_of(i for i, m in enumerate(bis.masks)
                      if bin(m).count("1") <= 1)
    rec = reconstruction_isomorphism(bis.pseudo, singles)
    assert rec.is_isomorphism
    assert len(rec.up.quotient.sem) == 7


def test_reconstruction_of_tau_frame_from_supports(e4):
    frame, theta, pos, supports = _tau_frame(e4)
    basis = mask_of({int(theta[e]) for e in range(len(e4))})
    rec = reconstruction_isomorphism(frame, basis)
    assert rec.is_isomorphism


def test_nucleus_on_pseudogroup_identity_for_join_coverage(e4):
    frame = as_frame(e4)
    nu = nucleus_on_pseudogroup(frame, empty_coverage(e4))
    assert list(nu.image) == list(range(len(e4)))


def test_nucleus_on_pseudogroup_from_tight(i2):
    pseudo = as_pseudogroup(i2)
    nu = nucleus_on_pseudogroup(pseudo, tight_coverage(i2))
    # closing the identity's principal ideal forces nothing new in a monoid
    assert nu(i2.identity) == i2.identity
    q = apply_nucleus_quotient(i2, nu, source_pseudo=pseudo)
    assert len(q.sem) <= len(i2)


def test_collapsing_coverage_reports_compatibility_loss(i2):
    from isg.errors import CompatibilityLost
    from isg.coverages import close_coverage

    # covering e1 by {0} forces, via translation, every conjugate of e1 into
    # each closed ideal, and those conjugates are pairwise incompatible
    e1 = i2_elt(i2, "e1")
    cov = close_coverage(i2, [(e1, 1 << i2.zero)])
    with pytest.raises(CompatibilityLost):
        nucleus_from_coverage(i2, cov)
