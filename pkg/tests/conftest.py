import random

import pytest

from rhibe.mlgroup import group_setup
from rhibe.scheme import rhibe_setup


class ZeroRng:
    """Every draw is 0: all blinding exponents vanish."""

    def randrange(self, *args):
        return 0

    def getrandbits(self, k):
        return 0


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def toy_group():
    return group_setup(8)


@pytest.fixture
def zero_rng():
    return ZeroRng()


@pytest.fixture
def system(rng):
    """(alpha, RL_root, ST_root, params) with N=4, L=3 at the toy profile."""
    return rhibe_setup(8, 4, 3, rng)
