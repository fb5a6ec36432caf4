import itertools

import pytest

import oracles as O
from metaweil.errors import TransversalityError
from metaweil.maslov import (
    GAUSS_PAIRING_SIGN, cocycle, cocycle_table, gamma, theta_from_gamma, theta_gauss, theta_squared,
    theta_triple,
)
from metaweil.symplectic import (
    SympSpace, enumerate_lagrangians, intersection_dim, standard_lagrangian, symplectic_group, transverse,
)


def valid_triples(d, q):
    lags = enumerate_lagrangians(SympSpace(d, q))
    return [t for t in itertools.product(lags, repeat=3) if transverse(t[2], t[0]) and transverse(t[2], t[1])]


@pytest.mark.parametrize("q", [3, 5])
def test_theta_matches_full_function_oracle(q):
    for L1, L2, V in valid_triples(1, q):
        c = O.theta_loop([list(r) for r in L1.basis], [list(r) for r in L2.basis], [list(r) for r in V.basis], 1, q)
        assert O.close(O.embed(theta_triple(L1, L2, V).value), c)


def test_theta_oracle_d2_sample():
    trips = valid_triples(2, 3)[::997]
    assert len(trips) >= 5
    for L1, L2, V in trips:
        c = O.theta_loop([list(r) for r in L1.basis], [list(r) for r in L2.basis], [list(r) for r in V.basis], 2, 3)
        assert O.close(O.embed(theta_triple(L1, L2, V).value), c)


@pytest.mark.parametrize("q", [3, 5])
def test_theta_squared_and_bridge(q):
    for t in valid_triples(1, q):
        th = theta_triple(*t)
        assert th.value * th.value == theta_squared(1, th.i, q)
        assert th.value == theta_gauss(*t)
    assert GAUSS_PAIRING_SIGN == 1


def test_transversality_error():
    V = standard_lagrangian(1, 3)
    with pytest.raises(TransversalityError):
        theta_triple(V, V, V)


def test_gamma_properties_exhaustive_q3():
    lags = enumerate_lagrangians(SympSpace(1, 3))
    for a, b, c in itertools.product(lags, repeat=3):
        g = gamma(a, b, c).value
        assert g * gamma(a, c, b).value == 1
        assert g * gamma(b, a, c).value == 1
        assert g ** 4 == 1
    for a, b, c, d in itertools.product(lags, repeat=4):
        lhs = gamma(a, b, c).value * gamma(a, d, b).value
        assert lhs == gamma(c, d, b).value * gamma(a, d, c).value


def test_gamma_invariance():
    lags = enumerate_lagrangians(SympSpace(1, 3))
    for g in symplectic_group(1, 3):
        for t in itertools.product(lags, repeat=3):
            assert gamma(*(L.act(g) for L in t)).value == gamma(*t).value


@pytest.mark.parametrize("q", [3, 5])
def test_theta_from_gamma(q):
    for t in valid_triples(1, q):
        if transverse(t[0], t[1]):
            assert theta_from_gamma(*t) == theta_triple(*t).value


def test_theta_takes_two_opposite_values():
    lags = enumerate_lagrangians(SympSpace(1, 5))
    for L1, L2 in itertools.product(lags, repeat=2):
        vals = {theta_triple(L1, L2, V).value for V in lags if transverse(V, L1) and transverse(V, L2)}
        assert len(vals) <= 2
        if len(vals) == 2:
            a, b = vals
            assert a == -b


def test_cocycle_examples():
    L0 = standard_lagrangian(1, 3)
    G = symplectic_group(1, 3)
    e = G[0].identity(1, 3)
    table = cocycle_table(G, L0)
    for g in G:
        assert table[e, g] == 1 == table[g, e]
        assert cocycle(g, g.inverse(), L0) == gamma(L0, L0.act(g), L0).value == 1
