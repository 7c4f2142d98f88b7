import pytest

from isg.errors import SizeLimit
from isg.topology import (
    discrete_topology,
    generate_topology,
    generated_by,
    open_label,
)


def test_generation_closes_under_union_and_intersection():
    top = generate_topology(3, [0b011, 0b110])
    assert top.opens == {0, 0b010, 0b011, 0b110, 0b111}
    assert generated_by(top, top.basis)


def test_discrete_topology():
    top = discrete_topology(3)
    assert len(top.opens) == 8
    assert top.is_discrete() and top.is_t1() and top.is_t0()


def test_sierpinski_is_t0_not_t1():
    top = generate_topology(2, [0b01])
    assert top.is_t0() and not top.is_t1()
    assert top.minimal_neighborhood(0) == 0b01
    assert top.minimal_neighborhood(1) == 0b11


def test_indiscrete_is_not_t0():
    top = generate_topology(2, [])
    assert not top.is_t0()


def test_closure_and_minimal_neighborhood():
    top = generate_topology(2, [0b01])
    assert top.closure_of(0b01) == 0b11    # the open point is dense
    assert top.closure_of(0b10) == 0b10


def test_subspace():
    top = generate_topology(3, [0b011, 0b110])
    sub = top.subspace(0b101)
    assert sub.n_points == 2
    assert sub.opens == {0, 0b01, 0b10, 0b11}


def test_open_cap():
    with pytest.raises(SizeLimit):
        generate_topology(20, [1 << i for i in range(20)], cap=1000)


def test_open_label():
    top = generate_topology(2, [0b01], labels=("p", "q"))
    assert open_label(top, 0b11) == "{p,q}"
