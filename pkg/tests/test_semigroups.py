import pytest
from hypothesis import given, settings, strategies as st

from isg.bitset import mask_of
from isg.errors import NonAssociative, NotInverseSemigroup, ZeroViolation
from isg.properties import idempotent_laws, join_implies_compatible, order_axioms
from isg.semigroups import from_op, restrict, validate_table

from conftest import i2_elt


def test_z2_is_valid():
    sem = validate_table(["e", "g"], [[0, 1], [1, 0]])
    assert sem.identity == 0 and sem.zero is None
    assert list(sem.inv) == [0, 1]


def test_i2_table_is_valid(i2):
    assert len(i2) == 7
    assert i2.names[i2.zero] == "0"
    assert i2.names[i2.identity] == "e12"


def test_left_zero_semigroup_rejected():
    # x*y = x gives every element several generalized inverses
    with pytest.raises(NotInverseSemigroup):
        validate_table(["a", "b"], [[0, 0], [1, 1]])


def test_non_associative_rejected():
    with pytest.raises(NonAssociative):
        validate_table(["a", "b"], [[1, 0], [0, 0]])


def test_declared_zero_must_absorb():
    with pytest.raises(ZeroViolation):
        validate_table(["e", "g"], [[0, 1], [1, 0]], zero=0)


def test_idempotents(e4, i2, z2):
    assert e4.idem_mask == e4.all_mask
    assert sorted(i2.names_of(i2.idem_mask)) == ["0", "e1", "e12", "e2"]
    assert z2.names_of(z2.idem_mask) == ["e"]


def test_idempotents_match_inverse_description(i3):
    alt = mask_of(i3.m(int(i3.inv[x]), x) for x in range(len(i3)))
    assert alt == i3.idem_mask


def test_leq_examples(i2):
    assert i2.le(i2_elt(i2, "e1"), i2_elt(i2, "id"))
    assert i2.le(i2_elt(i2, "t12"), i2_elt(i2, "sigma"))
    assert all(i2.le(x, x) for x in range(len(i2)))
    assert not i2.le(i2_elt(i2, "id"), i2_elt(i2, "e1"))


def test_compatibility_examples(i2):
    t12, t21, e1 = (i2_elt(i2, k) for k in ("t12", "t21", "e1"))
    assert all(i2.compatible(x, x) for x in range(len(i2)))
    # t12 and t21 join to the twist, so the table declares them compatible
    assert i2.compatible(t12, t21)
    assert i2.join_of(1 << t12 | 1 << t21) == i2_elt(i2, "sigma")
    # t12 * e1 = t12 is not idempotent
    assert not i2.compatible(e1, t12)


def test_down_and_up_sets(e4, i2):
    one = e4.index("1")
    assert e4.down_set(1 << one) == e4.all_mask
    assert e4.down_set(0) == 0
    e1 = i2_elt(i2, "e1")
    assert sorted(i2.names_of(i2.up[e1])) == ["e1", "e12"]


def test_order_axioms_all_fixtures(small_fixtures, i3):
    for sem in (*small_fixtures.values(), i3):
        for result in order_axioms(sem) + idempotent_laws(sem):
            assert result.passed, (result.name, result.witness)


def test_join_implies_compatible(small_fixtures):
    for sem in small_fixtures.values():
        for result in join_implies_compatible(sem):
            assert result.passed, result.witness


def test_restrict_to_idempotents_is_cached(i2):
    esem, to_parent = i2.idempotent_semilattice()
    assert len(esem) == 4
    assert esem.is_semilattice()
    again, _ = i2.idempotent_semilattice()
    assert again is esem
    for i, p in enumerate(to_parent):
        assert esem.names[i] == i2.names[int(p)]


def test_restrict_rejects_non_closed(i2):
    t12 = i2_elt(i2, "t12")
    with pytest.raises(Exception):
        restrict(i2, 1 << t12)


def test_join_of_empty_set_is_zero(e4, z2):
    assert e4.join_of(0) == e4.zero
    assert z2.join_of(0) is None


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_down_set_is_down_closed(small_fixtures, data):
    sem = data.draw(st.sampled_from(sorted(small_fixtures)))
    sem = small_fixtures[sem]
    mask = data.draw(st.integers(min_value=0, max_value=sem.all_mask))
    closed = sem.down_set(mask)
    assert sem.down_set(closed) == closed
    assert mask & ~closed == 0
    up = sem.up_set(mask)
    assert sem.up_set(up) == up


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_order_translation_invariance(small_fixtures, data):
    sem = small_fixtures[data.draw(st.sampled_from(sorted(small_fixtures)))]
    n = len(sem)
    x = data.draw(st.integers(0, n - 1))
    y = data.draw(st.integers(0, n - 1))
    z = data.draw(st.integers(0, n - 1))
    if sem.le(x, y):
        assert sem.le(sem.m(z, x), sem.m(z, y))
        assert sem.le(sem.m(x, z), sem.m(y, z))
        assert sem.le(int(sem.inv[x]), int(sem.inv[y]))


def test_from_op_checks_associativity_by_default():
    with pytest.raises(NonAssociative):
        from_op(["a", "b"], lambda i, j: 1 if (i, j) == (0, 0) else 0)
