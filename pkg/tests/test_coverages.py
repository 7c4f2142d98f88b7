import pytest

from isg.bitset import bits, subsets_of
from isg.coverages import (
    Coverage,
    check_axioms,
    close_coverage,
    empty_coverage,
    extend_from_idempotents,
    induced_coverage,
    is_cover_to_join,
    minimal_covers,
    restrict_to_idempotents,
    tight_coverage,
    union,
)
from isg.errors import (
    BaseMismatch,
    ConjugationClosureFails,
    NoZero,
    NotDownSet,
    NotHomomorphism,
)
from isg.properties import (
    coverage_suite,
    restrict_extend_roundtrip,
    tight_superset_law,
)

from conftest import i2_elt


def test_cover_must_sit_below_its_element(e4):
    with pytest.raises(NotDownSet):
        Coverage(e4, {e4.index("a"): frozenset({1 << e4.index("b")})})


def test_close_empty_seeds_gives_empty_coverage(e4):
    cov = close_coverage(e4, [])
    assert not cov.covers


def test_close_coverage_on_semilattice(e4):
    one = e4.index("1")
    a, b = e4.index("a"), e4.index("b")
    cov = close_coverage(e4, [(one, 1 << a | 1 << b)])
    # translating by a meets the cover into {a, 0}
    assert (1 << a | 1 << e4.zero) in cov.sets(a)
    # every element carries a translate
    assert all(cov.sets(e) for e in range(len(e4)))


def test_close_coverage_by_table_translation(i2):
    sigma = i2_elt(i2, "sigma")
    t12, t21 = i2_elt(i2, "t12"), i2_elt(i2, "t21")
    cov = close_coverage(i2, [(sigma, 1 << t12 | 1 << t21)])
    # left-translating by sigma^-1 = sigma lands on the identity
    translated = i2.left_translate(sigma, 1 << t12 | 1 << t21)
    assert translated in cov.sets(i2.identity)
    assert check_axioms(cov).is_coverage


def test_closed_coverage_always_translation_closed(e4, i2):
    for sem, seed in ((e4, (e4.index("1"), 1 << e4.index("a"))),
                      (i2, (i2_elt(i2, "sigma"), 1 << i2_elt(i2, "t12")))):
        cov = close_coverage(sem, [seed])
        assert check_axioms(cov).is_coverage


def test_empty_coverage_is_weak_but_not_strong(e4):
    rep = check_axioms(empty_coverage(e4))
    assert rep.is_coverage and not rep.is_strong
    assert any(axiom == "R" for axiom, _ in rep.failures)


def test_union_of_coverages(e4):
    tight = tight_coverage(e4)
    assert union(tight, empty_coverage(e4)) == tight
    assert union(tight, tight) == tight
    one = e4.index("1")
    seeded = close_coverage(e4, [(one, 1 << one)])
    merged = union(tight, seeded)
    assert check_axioms(merged).is_coverage
    assert merged.sets(one) >= tight.sets(one)


def test_union_requires_same_base(e4, i2):
    with pytest.raises(BaseMismatch):
        union(tight_coverage(e4), tight_coverage(i2))


def test_tight_coverage_examples(e4):
    one, a, b = e4.index("1"), e4.index("a"), e4.index("b")
    tight = tight_coverage(e4)
    assert (1 << a | 1 << b) in tight.sets(one)
    assert (1 << a) not in tight.sets(one)
    for x in range(len(e4)):
        if x != e4.zero:
            assert (1 << x) in tight.sets(x)


def test_tight_requires_zero(z2):
    with pytest.raises(NoZero):
        tight_coverage(z2)


def test_tight_is_strong_coverage(e4, chain3, i2, b3):
    for sem in (e4, chain3, i2, b3):
        for result in coverage_suite(tight_coverage(sem)):
            assert result.passed, (result.name, result.witness)


def test_tight_superset_closure(e4, i2, chain4):
    for sem in (e4, i2, chain4):
        for result in tight_superset_law(sem, tight_coverage(sem)):
            assert result.passed, result.witness


def test_semilattice_tightness_forms_agree(e4, b3, chain4):
    # product form and common-lower-bound form coincide on semilattices
    for sem in (e4, b3, chain4):
        zero_bit = 1 << sem.zero
        for a in range(len(sem)):
            for z_mask in subsets_of(sem.down[a]):
                by_product = all(
                    any(sem.m(b, z) != sem.zero for z in bits(z_mask))
                    for b in bits(sem.down[a] & ~zero_bit))
                by_meets = all(
                    any(sem.down[b] & sem.down[z] & ~zero_bit for z in bits(z_mask))
                    for b in bits(sem.down[a] & ~zero_bit))
                assert by_product == by_meets
                assert by_product == (z_mask in tight_coverage(sem).sets(a))


def test_minimal_tight_covers(e4):
    one = e4.index("1")
    tight = tight_coverage(e4)
    mins = minimal_covers(tight, one)
    assert sorted(e4.names_of(m) for m in mins) == [["1"], ["a", "b"]]


def test_restriction_of_tight_equals_tight_on_idempotents(i2):
    restricted = restrict_to_idempotents(tight_coverage(i2))
    esem = restricted.base
    assert restricted.covers == tight_coverage(esem).covers


def test_restriction_keeps_conjugation_closure(i2):
    cov = tight_coverage(i2)
    restricted = restrict_to_idempotents(cov)
    esem, to_parent = i2.idempotent_semilattice()
    back = {int(p): k for k, p in enumerate(to_parent)}
    for e_sub, fam in restricted.covers.items():
        e = int(to_parent[e_sub])
        for s in range(len(i2)):
            ses = i2.m(i2.m(s, e), int(i2.inv[s]))
            for x_mask in fam:
                parent = 0
                for x in bits(x_mask):
                    parent |= 1 << int(to_parent[x])
                conj = i2.right_translate(i2.left_translate(s, parent),
                                          int(i2.inv[s]))
                conj_sub = 0
                for x in bits(conj):
                    conj_sub |= 1 << back[x]
                assert conj_sub in restricted.sets(back[ses])


def test_extend_restrict_roundtrip(e4, i2, chain3):
    for sem in (e4, i2, chain3):
        for result in restrict_extend_roundtrip(sem, tight_coverage(sem)):
            assert result.passed, (result.name, result.witness)


def test_extension_covers_the_twist(i2):
    restricted = restrict_to_idempotents(tight_coverage(i2))
    extended = extend_from_idempotents(i2, restricted)
    sigma = i2_elt(i2, "sigma")
    t12, t21 = i2_elt(i2, "t12"), i2_elt(i2, "t21")
    assert (1 << t12 | 1 << t21) in extended.sets(sigma)


def test_extension_checks_conjugation_closure(i2):
    esem, to_parent = i2.idempotent_semilattice()
    back = {int(p): k for k, p in enumerate(to_parent)}
    e1 = back[i2_elt(i2, "e1")]
    # a cover of e1 alone cannot be conjugation closed in the twist monoid
    bad = Coverage(esem, {e1: frozenset({1 << esem.zero})})
    with pytest.raises(ConjugationClosureFails):
        extend_from_idempotents(i2, bad)


def test_extension_of_empty_is_empty(i2):
    esem, _ = i2.idempotent_semilattice()
    extended = extend_from_idempotents(i2, empty_coverage(esem))
    assert not extended.covers


def test_cover_to_join_identity_map_empty_coverage(e4):
    from isg.ideals import as_frame
    import numpy as np

    frame = as_frame(e4)
    theta = np.arange(len(e4), dtype=np.int32)
    report = is_cover_to_join(empty_coverage(e4), theta, frame)
    assert report.cover_to_join and report.idempotent_pure


def test_cover_to_join_rejects_non_homomorphism(e4):
    from isg.ideals import as_frame
    import numpy as np

    frame = as_frame(e4)
    theta = np.zeros(len(e4), dtype=np.int32)
    theta[e4.index("a")] = e4.index("1")
    with pytest.raises(NotHomomorphism):
        is_cover_to_join(empty_coverage(e4), theta, frame)


def test_tight_supports_are_cover_to_join(e4):
    import numpy as np

    from isg.ideals import as_pseudogroup
    from isg.semigroups import from_op
    from isg.tight import tight_filter_topology

    top, family, supports = tight_filter_topology(e4)
    opens = sorted(top.opens)
    pos = {o: k for k, o in enumerate(opens)}
    frame_sem = from_op([f"O{k}" for k in range(len(opens))],
                        lambda i, j: pos[opens[i] & opens[j]],
                        assume_associative=True)
    frame = as_pseudogroup(frame_sem)
    theta = np.asarray([pos[supports[e]] for e in range(len(e4))],
                       dtype=np.int32)
    report = is_cover_to_join(tight_coverage(e4), theta, frame)
    assert report.cover_to_join and report.idempotent_pure
    # a coverage relating the top to a single atom is not sent to a join
    one, a = e4.index("1"), e4.index("a")
    skew = Coverage(e4, {one: frozenset({1 << a})})
    assert not is_cover_to_join(skew, theta, frame).cover_to_join


def test_induced_coverage_contains_translates(e4):
    import numpy as np

    from isg.ideals import as_pseudogroup
    from isg.groupoids import filter_groupoid
    from isg.semigroups import from_op
    from isg.bitset import mask_of

    G, filters = filter_groupoid(e4, "patch")
    opens = sorted(G.topology.opens)
    pos = {o: k for k, o in enumerate(opens)}
    frame_sem = from_op([f"O{k}" for k in range(len(opens))],
                        lambda i, j: pos[opens[i] & opens[j]],
                        assume_associative=True)
    frame = as_pseudogroup(frame_sem, check=False)
    u_mask = [mask_of(i for i, f in enumerate(filters) if f.carrier >> e & 1)
              for e in range(len(e4))]
    theta = np.asarray([pos[m] for m in u_mask], dtype=np.int32)
    cov = induced_coverage(tight_coverage(e4), theta, frame)
    one, a, b = e4.index("1"), e4.index("a"), e4.index("b")
    expected = 1 << int(theta[a]) | 1 << int(theta[b])
    assert expected in cov.sets(int(theta[one]))
    assert cov.joins is not None
    # union decompositions are implicit members: U_a and U_b cover their union
    both = pos[u_mask[a] | u_mask[b]]
    assert cov.has(both, expected)
    assert not cov.has(int(theta[one]), 1 << int(theta[a]))
