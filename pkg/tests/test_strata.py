import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from metaweil.scalars import CycloNum, sqrt_q
from metaweil.strata import (
    STRATA_TABLES, SymForm, all_symmetric, cone_functions, congruence_orbits, congruent, corank,
    discriminant_class, even_odd_parts, four_cone_pointwise, four_psi, kernel_line_count, parity_support,
    s_psi, s_psi_closed, squared_identity, stratum_sizes, sym_dim, table,
)


def test_symform_validation():
    with pytest.raises(ValueError):
        SymForm(((0, 1), (2, 0)), 3)
    assert corank(SymForm(((1, 0), (0, 0)), 3)) == 1


def test_cone_examples():
    cf = cone_functions(1, 3)
    assert cf.N(((1,),)) == 2 and cf.N(((2,),)) == 0
    assert cf.l1(((1,),)) == 1 and cf.l1(((2,),)) == -1


@pytest.mark.parametrize("d,q", [(1, 3), (1, 5), (2, 3)])
def test_cone_counts_vs_brute_force(d, q):
    cf = cone_functions(d, q)
    for t, v in cf.N.items():
        assert v == O.cone_count(t, q)
        assert v == cf.l0(t) + cf.l1(t)


@pytest.mark.parametrize("d,q", [(1, 3), (1, 5), (2, 3), (2, 5)])
def test_s_psi_vs_oracle_and_closed_form(d, q):
    for b in all_symmetric(d, q):
        s = s_psi(b, q)
        assert s == s_psi_closed(b, q)
        assert O.close(O.embed(s), O.s_psi(b, q))
        rec = squared_identity(b, q)
        assert rec.passed


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=6, max_size=6), st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_congruence_invariance(vals, a):
    q = 5
    b = ((vals[0], vals[1], vals[2]), (vals[1], vals[3], vals[4]), (vals[2], vals[4], vals[5]))
    A = [a[0:3], a[3:6], a[6:9]]
    from metaweil import fqlinalg as fl
    if fl.det(A, q) == 0:
        return
    c = congruent(b, A, q)
    assert corank(c, q) == corank(b, q)
    assert discriminant_class(c, q) == discriminant_class(b, q)
    assert s_psi(c, q) == s_psi(b, q)


def test_congruence_orbit_count():
    assert len(congruence_orbits(2, 3)) == 5
    assert stratum_sizes(3, 3) == {0: 468, 1: 234, 2: 26, 3: 1}


@pytest.mark.parametrize("d,q", [(1, 3), (2, 3), (3, 3)])
def test_kernel_lines(d, q):
    for b in all_symmetric(d, q):
        i = corank(b, q)
        assert kernel_line_count(b, q) == (q ** i - 1) // (q - 1)


@pytest.mark.parametrize("d,q", [(1, 3), (2, 3)])
def test_fourier_vs_oracle(d, q):
    cf = cone_functions(d, q)
    root = O.embed(sqrt_q(q))
    for f in (cf.l0, cf.l1):
        F = four_psi(f)
        ref = O.fourier({t: float(v.to_fraction()) for t, v in f.items()}, d, q, root)
        for b, v in F.items():
            assert O.close(O.embed(v), ref[b])


@pytest.mark.parametrize("d,q", [(1, 3), (1, 5), (2, 3), (2, 5)])
def test_fourier_inversion(d, q):
    cf = cone_functions(d, q)
    for f in (cf.N, cf.l1):
        F = four_psi(f)
        assert four_psi(F, inverse=True).values == f.values
        neg = [f(tuple(tuple(-x % q for x in r) for r in t)) for t in f.points()]
        assert four_psi(F).values == neg


@pytest.mark.parametrize("d,q", [(1, 3), (1, 5), (2, 3), (3, 3)])
def test_parity_support(d, q):
    for i in (0, 1):
        rep = parity_support(i, d, q)
        assert rep.passed, rep.counterexample
        assert rep.to_json()["passed"]


@pytest.mark.parametrize("d,q", [(1, 3), (2, 5), (3, 3)])
def test_even_odd_split_and_pointwise(d, q):
    sg, ss = even_odd_parts(d, q)
    cf = cone_functions(d, q)
    from metaweil.scalars import sqrt_q_power
    up = sqrt_q_power(q, sym_dim(d))
    F1 = four_psi(cf.l1)
    for k, b in enumerate(all_symmetric(d, q)):
        assert s_psi(b, q) == sg.values[k] + ss.values[k]
        assert sg.values[k].is_zero() or ss.values[k].is_zero()
        assert four_cone_pointwise(1, b, q) == F1.values[k] * up


def test_named_tables():
    for name in STRATA_TABLES:
        t = table(name, 2, 3)
        assert len(t.values) == 27
        assert len(t.to_json()) == 27
    with pytest.raises(ValueError):
        table("nope", 1, 3)
