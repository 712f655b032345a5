import itertools
import random

import pytest

from rhibe.errors import UsageError
from rhibe.mlgroup import group_setup, pair
from rhibe.pkbe import pkbe_decaps, pkbe_encaps, pkbe_genkey, pkbe_setup, pkbe_unmask

G = group_setup(8)


@pytest.fixture(scope="module")
def setup():
    return pkbe_setup(G, 4, random.Random(99))


def test_param_count_and_powers(setup):
    (alpha, gamma), pp, y = setup
    present = [x for x in pp.xs if x is not None]
    assert len(present) == 2 * 4 - 1
    assert pp.element_count() == 2 * 4
    for j in range(1, 9):
        if j != 5:
            assert pp.x(j).log == pow(alpha, j, G.order)
    assert pp.big_gamma == G.generator(2) ** pow(alpha, 5, G.order)
    assert y == G.generator(1) ** gamma


def test_pair_first_and_last_power(setup):
    _, pp, _ = setup
    assert pair(pp.x(1), pp.x(4)) == pp.big_gamma


def test_missing_power(setup):
    _, pp, _ = setup
    with pytest.raises(UsageError):
        pp.x(5)
    with pytest.raises(UsageError):
        pp.x(9)


def test_genkey(setup):
    (alpha, gamma), pp, _ = setup
    assert pkbe_genkey(2, 0, pp).k == G.identity(1)
    assert pkbe_genkey(3, gamma, pp).k.log == pow(alpha, 3, G.order) * gamma % G.order
    with pytest.raises(UsageError):
        pkbe_genkey(5, gamma, pp)
    with pytest.raises(UsageError):
        pkbe_genkey(0, gamma, pp)


def test_encaps_empty_set(setup):
    _, pp, y = setup
    header, _ = pkbe_encaps([], 17, y, pp)
    assert header.e1 == y ** 17


def test_encaps_zero_beta(setup):
    _, pp, y = setup
    header, ek = pkbe_encaps([1, 3], 0, y, pp)
    assert header.e0.is_identity() and header.e1.is_identity() and ek.is_identity()


def test_encaps_rejects_out_of_range(setup):
    _, pp, y = setup
    with pytest.raises(UsageError):
        pkbe_encaps([0, 2], 5, y, pp)


def test_n2_exponent_space():
    (alpha, gamma), pp, y = pkbe_setup(G, 2, random.Random(3))
    beta = 123456
    header, ek = pkbe_encaps({1}, beta, y, pp)
    # e(X_1, E_1) / e(E_0, K_1): exponents beta*alpha*(gamma + alpha^2) - beta*alpha*gamma = beta*alpha^3
    p = G.order
    expected = beta * pow(alpha, 3, p) % p
    assert ek.log == expected
    assert pkbe_decaps(header, pkbe_genkey(1, gamma, pp), pp).log == expected
    assert pkbe_decaps(header, pkbe_genkey(2, gamma, pp), pp) is None


def test_exhaustive_subsets_n4(setup):
    (alpha, gamma), pp, y = setup
    rng = random.Random(4)
    keys = {d: pkbe_genkey(d, gamma, pp) for d in range(1, 5)}
    for size in range(5):
        for subset in itertools.combinations(range(1, 5), size):
            beta = G.random_scalar(rng)
            header, ek = pkbe_encaps(subset, beta, y, pp)
            assert ek == G.generator(2) ** (beta * pow(alpha, 5, G.order))
            assert header.element_count() if hasattr(header, "element_count") else True
            for d, key in keys.items():
                got = pkbe_decaps(header, key, pp)
                if d in subset:
                    assert got == ek
                else:
                    assert got is None
                    # the bypassed formula cannot produce the session key without X_{N+1}
                    others = [j for j in subset]
                    forced = pkbe_unmask(pp, d, others, header.e0, header.e1, key.k)
                    assert forced != ek
