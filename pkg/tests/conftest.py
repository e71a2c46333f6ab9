import pytest

from poroweights import (
    CantorIterate,
    FinitePoints,
    GeometricPlusLattice,
    Interval,
    Lattice,
    Reflect,
)


@pytest.fixture(scope="session")
def integers():
    return Lattice(0.0, 1.0, "two_sided")


@pytest.fixture(scope="session")
def naturals():
    return Lattice(0.0, 1.0, "right")


@pytest.fixture(scope="session")
def reflected_naturals():
    return Reflect(Lattice(0.0, 1.0, "right"))


@pytest.fixture(scope="session")
def geometric_naturals():
    return GeometricPlusLattice(2.0, Lattice(0.0, 1.0, "right"))


@pytest.fixture(scope="session")
def singleton():
    return FinitePoints([0.0])


@pytest.fixture(scope="session")
def cantor10():
    return CantorIterate(0.0, 1.0, 1.0 / 3.0, 10)


@pytest.fixture(scope="session")
def window():
    return Interval(-64.0, 64.0)
