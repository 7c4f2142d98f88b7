import pytest

from isg.fixtures import (
    chain_semilattice,
    cyclic_group,
    powerset_semilattice,
    symmetric_inverse,
)


@pytest.fixture(scope="session")
def e4():
    return powerset_semilattice(2)


@pytest.fixture(scope="session")
def b3():
    return powerset_semilattice(3)


@pytest.fixture(scope="session")
def i2():
    return symmetric_inverse(2)


@pytest.fixture(scope="session")
def i3():
    return symmetric_inverse(3)


@pytest.fixture(scope="session")
def z2():
    return cyclic_group(2)


@pytest.fixture(scope="session")
def chain3():
    return chain_semilattice(3)


@pytest.fixture(scope="session")
def chain4():
    return chain_semilattice(4)


@pytest.fixture(scope="session")
def small_fixtures(e4, i2, z2, chain3, chain4, b3):
    """Everything with at most 8 elements, for subset-scan oracles."""
    return {"e4": e4, "i2": i2, "z2": z2, "chain3": chain3,
            "chain4": chain4, "b3": b3}


def i2_elt(sem, what: str) -> int:
    """Semantic lookup for the 7-element symmetric inverse monoid."""
    table = {"zero": "0", "e1": "e1", "e2": "e2", "id": "e12",
             "t12": "1>2", "t21": "2>1", "sigma": "1>2.2>1"}
    return sem.index(table[what])
