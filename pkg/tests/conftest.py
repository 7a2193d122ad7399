import pytest

from newton_cocenter import AffineWeylGroup, build_root_datum

_GROUPS = {}


def group(label, lattice="sc"):
    key = (label, lattice)
    if key not in _GROUPS:
        _GROUPS[key] = AffineWeylGroup(build_root_datum(label, lattice))
    return _GROUPS[key]


@pytest.fixture
def a1():
    return group("A1")


@pytest.fixture
def a2():
    return group("A2")


@pytest.fixture
def c2():
    return group("C2")


@pytest.fixture
def g2():
    return group("G2")


@pytest.fixture
def gl2():
    return group("GL2")


@pytest.fixture
def gl5():
    return group("GL5")
