import random

import pytest

from prepcrystal.catalog import (a2d2_datum, a2d2_fixtures, b2_datum,
                                 b2_fixtures, g2_datum, g2_fixtures)
from prepcrystal.cartan import validate_datum
from prepcrystal.fields import GFp
from prepcrystal.genericops import GenericityPolicy


@pytest.fixture(scope="session")
def b2():
    return b2_datum()


@pytest.fixture(scope="session")
def g2():
    return g2_datum()


@pytest.fixture(scope="session")
def a2d2():
    return a2d2_datum()


@pytest.fixture(scope="session")
def a2d1():
    """Classical A2: symmetric Cartan matrix with identity symmetrizer."""
    return validate_datum([[2, -1], [-1, 2]], [1, 1], [(1, 2)])


@pytest.fixture(scope="session")
def big62():
    """The Serre-example datum C = [[2,-6],[-2,2]], D = diag(2,6)."""
    return validate_datum([[2, -6], [-2, 2]], [2, 6], [(1, 2)])


@pytest.fixture(scope="session")
def b2fx():
    return b2_fixtures()[1]


@pytest.fixture(scope="session")
def g2fx():
    return g2_fixtures()[1]


@pytest.fixture(scope="session")
def a2fx():
    return a2d2_fixtures()[1]


@pytest.fixture()
def policy():
    return GenericityPolicy(seed=0)


@pytest.fixture()
def bigfield():
    return GFp(2147483647)


@pytest.fixture()
def rng():
    return random.Random(20240817)
