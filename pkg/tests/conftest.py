import os

import pytest
from dotenv import find_dotenv, load_dotenv

load_dotenv(find_dotenv(".env"))
os.environ.setdefault("ITEKIT_ENV", "test")

from itekit.manifold import WarpedManifold, validate_pair
from itekit.settings import DEFAULT_TOLERANCES


def disk(index=(1,), name="disk", dimension=2):
    return WarpedManifold.from_dict(
        {"dimension": dimension, "domain": {"cap": 1}, "warp": [0, 1], "index": list(index)},
        name=name,
    )


def cylinder(index=(1,), name="cylinder"):
    return WarpedManifold.from_dict(
        {"dimension": 2, "domain": {"shell": [0, "pi"]}, "warp": [1], "index": list(index)},
        name=name,
    )


@pytest.fixture(scope="session")
def tol():
    return DEFAULT_TOLERANCES


@pytest.fixture(scope="session")
def unit_disk():
    return disk()


@pytest.fixture(scope="session")
def flat_cylinder():
    return cylinder()


@pytest.fixture(scope="session")
def disk_pair():
    """A21 disks, ``n1 = 1``, ``n2 = 2``."""

    return validate_pair(disk((1,), "m1"), disk((2,), "m2"))


@pytest.fixture(scope="session")
def a22_pair():
    """A22 disks with ``n2 = 3/2 - r/2``: equal on the boundary, normal derivatives 0 and -1/2."""

    return validate_pair(disk((1,), "m1"), disk(("3/2", "-1/2"), "m2"))


@pytest.fixture(scope="session")
def crossing_pair():
    """``n1 = 1``, ``n2 = 0.4 + 0.8 r^2`` on the unit disk."""

    return validate_pair(disk((1,), "m1"), disk(("2/5", 0, "4/5"), "m2"))


@pytest.fixture(scope="session")
def cylinder_pair():
    """Flat cylinders ``[0, pi] x S^1`` with ``n1 = 1``, ``n2 = 4``."""

    return validate_pair(cylinder((1,), "m1"), cylinder((4,), "m2"))


@pytest.fixture(scope="session")
def overlap_pair():
    """Flat cylinders with ``n1 = 1``, ``n2 = 9``; ``lambda = 1`` is a common pole with parallel data."""

    return validate_pair(cylinder((1,), "m1"), cylinder((9,), "m2"))


@pytest.fixture(scope="session")
def zeta_pair():
    """The cylinder pair with constant ``zeta = 1/2`` on both boundary circles."""

    return validate_pair(cylinder((1,), "m1"), cylinder((4,), "m2"), ["1/2", "1/2"])
