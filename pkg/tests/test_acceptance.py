"""Acceptance criteria, one test per criterion; every comparison is exact."""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from metaweil.heisenberg import equivariant_span_rank, intertwiner, scalar_of
from metaweil.maslov import cocycle_table, gamma, theta_gauss, theta_squared, theta_triple
from metaweil.scalars import CycloNum, legendre
from metaweil.strata import (
    all_symmetric, corank, kernel_line_count, parity_support, s_psi, s_psi_closed, squared_identity,
)
from metaweil.suites import cocycle_identity_counterexample
from metaweil.symplectic import (
    SympSpace, enumerate_lagrangians, generators, intersection_dim, siegel_parabolic, standard_lagrangian,
    symplectic_group, transverse, weyl_element,
)
from metaweil.thetap1 import enumerate_bunp_slice
from metaweil.weilrep import (
    find_splitting, operator_cocycle_table, parabolic_homomorphism_counterexample, schrodinger_weyl,
    verify_splitting, weil_inverse,
)

pytestmark = pytest.mark.acceptance


def _valid(t):
    return transverse(t[2], t[0]) and transverse(t[2], t[1])


def _valid_triples(d, q, sample=None, seed=0):
    lags = enumerate_lagrangians(SympSpace(d, q))
    if sample is None:
        return [t for t in itertools.product(lags, repeat=3) if _valid(t)]
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < sample:
        t = tuple(lags[int(i)] for i in rng.integers(0, len(lags), 3))
        if _valid(t):
            out.append(t)
    return out


def test_ac01_theta_squared(acceptance):
    t0 = time.perf_counter()
    counts, ok = {}, True
    for d, q, sample in [(1, 3, None), (1, 5, None), (2, 3, 500)]:
        trips = _valid_triples(d, q, sample)
        counts[f"d{d}q{q}"] = len(trips)
        for t in trips:
            th = theta_triple(*t)
            ok &= th.value * th.value == theta_squared(d, intersection_dim(t[0], t[1]), q)
    dt = time.perf_counter() - t0
    assert acceptance(1, "theta^2 = (-1/q)^(d-i) q^(3d+i)", ok and dt < 60, f"{counts}, {dt:.1f}s")


def test_ac02_gauss_bridge(acceptance):
    t0 = time.perf_counter()
    counts, ok = {}, True
    for d, q, sample in [(1, 3, None), (1, 5, None), (2, 3, 200)]:
        trips = _valid_triples(d, q, sample, seed=1)
        counts[f"d{d}q{q}"] = len(trips)
        ok &= all(theta_triple(*t).value == theta_gauss(*t) for t in trips)
    dt = time.perf_counter() - t0
    assert acceptance(2, "theta_triple = theta_gauss", ok and dt < 60, f"{counts}, {dt:.1f}s")


def test_ac03_intertwiner_constant(acceptance):
    t0 = time.perf_counter()
    n, ok = 0, True
    for d in (1, 2):
        lags = enumerate_lagrangians(SympSpace(d, 3))
        for A, B in itertools.product(lags, repeat=2):
            n += 1
            ok &= scalar_of(intertwiner(B, A) @ intertwiner(A, B)) == 3 ** (d + intersection_dim(A, B))
    dt = time.perf_counter() - t0
    assert acceptance(3, "F_{L2,L1} F_{L1,L2} = q^(d + dim L1 cap L2)", ok and dt < 60, f"{n} pairs, {dt:.1f}s")


def test_ac04_gamma_identities(acceptance):
    t0 = time.perf_counter()
    lags = enumerate_lagrangians(SympSpace(1, 3))
    g = lambda *t: gamma(*t).value
    ok1 = all(g(a, b, c) == g(a, c, b).inverse() == g(b, a, c).inverse()
              for a, b, c in itertools.product(lags, repeat=3))
    ok3 = all(g(a, b, c) * g(a, d, b) == g(c, d, b) * g(a, d, c)
              for a, b, c, d in itertools.product(lags, repeat=4))
    trips = list(itertools.product(lags, repeat=3))
    ok2 = all(g(*(L.act(x) for L in t)) == g(*t) for x in symplectic_group(1, 3) for t in trips)
    dt = time.perf_counter() - t0
    ok = ok1 and ok2 and ok3 and dt < 60
    assert acceptance(4, "gamma antisymmetry, Sp-invariance, quadruple relation", ok,
                      f"(1) {ok1} on 64, (2) {ok2} on 24x64, (3) {ok3} on 256, {dt:.1f}s")


def test_ac05_cocycle_identity(acceptance):
    t0 = time.perf_counter()
    G = sorted(symplectic_group(1, 3))
    V = standard_lagrangian(1, 3)
    gam = cocycle_table(G, V)
    op = operator_cocycle_table(G, V)
    bad_gam = cocycle_identity_counterexample(gam, G, 12)
    bad_op = cocycle_identity_counterexample(op, G, 12)
    # plain CycloNum products on every triple as a second, unvectorised pass
    slow_ok = all(op[a, b] * op[a @ b, c] == op[b, c] * op[a, b @ c] for a, b, c in itertools.product(G, repeat=3))
    dt = time.perf_counter() - t0
    ok = bad_gam is None and bad_op is None and slow_ok and dt < 300
    assert acceptance(5, "2-cocycle identity on Sp2(F3)^3", ok, f"{len(G) ** 3} triples each, {dt:.1f}s")


def test_ac06_splitting(acceptance):
    t0 = time.perf_counter()
    G = sorted(symplectic_group(1, 3))
    op = operator_cocycle_table(G, standard_lagrangian(1, 3))
    s = find_splitting(op, G, generators(1, 3))
    ok = s is not None and verify_splitting(op, s, G) is None
    ok &= s is not None and all(op[a, b] == s[a] * s[b] * s[a @ b].inverse() for a in G for b in G)
    dt = time.perf_counter() - t0
    assert acceptance(6, "explicit splitting of the cocycle on Sp2(F3)", ok and dt < 300, f"{dt:.1f}s")


def test_ac07_schrodinger_formulas(acceptance):
    t0 = time.perf_counter()
    hom = {d: parabolic_homomorphism_counterexample(siegel_parabolic(d, 3)) is None for d in (1, 2)}
    units = {}
    for d in (1, 2):
        V = standard_lagrangian(d, 3)
        w = weyl_element(d, 3)
        c = scalar_of(schrodinger_weyl(w) @ weil_inverse(w, V))
        units[d] = c * c.conj() == 1
    dt = time.perf_counter() - t0
    ok = all(hom.values()) and all(units.values()) and dt < 60
    assert acceptance(7, "Schroedinger formulas: parabolic homomorphism, Weyl unit scalar", ok,
                      f"P of Sp2 and Sp4 (orders {len(siegel_parabolic(1, 3))}, {len(siegel_parabolic(2, 3))}), "
                      f"{dt:.1f}s")


def test_ac08_stone_von_neumann(acceptance):
    t0 = time.perf_counter()
    ranks = {(d, q): equivariant_span_rank(standard_lagrangian(d, q)) for d, q in [(1, 3), (1, 5), (2, 3)]}
    dt = time.perf_counter() - t0
    ok = all(r == q ** (2 * d) for (d, q), r in ranks.items()) and dt < 60
    assert acceptance(8, "rho(h) span all of End(S_L)", ok, f"ranks {list(ranks.values())}, {dt:.1f}s")


def test_ac09_parity_support(acceptance):
    t0 = time.perf_counter()
    res = {(d, q, i): parity_support(i, d, q).passed for d, q in [(1, 3), (1, 5), (2, 3), (3, 3)] for i in (0, 1)}
    dt = time.perf_counter() - t0
    ok = all(res.values()) and dt < 120
    assert acceptance(9, "Fourier parity support of l0, l1", ok, f"{sum(res.values())}/{len(res)}, {dt:.1f}s")


def test_ac10_closed_form_and_norm(acceptance):
    t0 = time.perf_counter()
    n, ok = 0, True
    for d, q in itertools.product((1, 2), (3, 5)):
        for b in all_symmetric(d, q):
            n += 1
            s = s_psi(b, q)
            ok &= s == s_psi_closed(b, q)
            ok &= s * s.conj() == q ** (d + corank(b, q))
    dt = time.perf_counter() - t0
    assert acceptance(10, "s_psi = closed form, s conj(s) = q^(d+corank)", ok and dt < 60, f"{n} forms, {dt:.1f}s")


def test_ac11_plain_square(acceptance):
    t0 = time.perf_counter()
    q = 5
    assert legendre(-1, q) == 1
    n, ok = 0, True
    for d in (1, 2):
        for b in all_symmetric(d, q):
            n += 1
            s = s_psi(b, q)
            ok &= s * s == q ** (d + corank(b, q))
            ok &= squared_identity(b, q).plain_square_ok is True
    dt = time.perf_counter() - t0
    assert acceptance(11, "s_psi^2 = q^(d+j) for q = 1 mod 4", ok and dt < 60, f"{n} forms, {dt:.1f}s")


def test_ac12_kernel_lines(acceptance):
    t0 = time.perf_counter()
    n, ok = 0, True
    for d in (2, 3):
        for b in all_symmetric(d, 3):
            i = corank(b, 3)
            if i >= 1:
                n += 1
                ok &= kernel_line_count(b, 3) == (3 ** i - 1) // 2
    dt = time.perf_counter() - t0
    assert acceptance(12, "lines in ker b = (q^i - 1)/(q - 1)", ok and dt < 60, f"{n} degenerate forms, {dt:.1f}s")


def test_ac13_p1_theta(acceptance):
    t0 = time.perf_counter()
    keys = ("f_p=s_psi(period_form)", "h0_of_M=corank", "weight")
    counts, ok = {}, True
    for n, min_deg, q in [(1, -4, 3), (1, -4, 5), (2, -2, 3)]:
        recs = list(enumerate_bunp_slice(n, min_deg, q))
        counts[f"n{n}q{q}"] = len(recs)
        ok &= all(r["checks"][k] for r in recs for k in keys)
        if n == 2:
            ok &= len(recs) == 27
    dt = time.perf_counter() - t0
    assert acceptance(13, "P^1: f_p = s_psi(b), h0(M) = corank, |f_p|^2 = q^(r+i)", ok and dt < 300,
                      f"{counts}, {dt:.1f}s")


DETERMINISM_RUNS = [
    ["verify", "maslov-identities", "--d", "1", "--q", "3"],
    ["verify", "maslov-identities", "--d", "2", "--q", "3", "--samples", "60", "--seed", "5"],
    ["verify", "cocycle", "--q", "3"],
    ["verify", "weil", "--d", "1", "--q", "3"],
    ["verify", "strata", "--d", "2", "--q", "3"],
    ["verify", "p1", "--n", "1", "--min-deg", "-3", "--q", "3"],
    ["table", "gamma", "--d", "1", "--q", "3"],
    ["p1", "sweep", "--n", "2", "--min-deg", "-2", "--q", "3"],
]


def test_ac14_determinism(acceptance, tmp_path):
    t0 = time.perf_counter()
    ok = True
    for k, args in enumerate(DETERMINISM_RUNS):
        outs = []
        for rep in range(2):
            path = tmp_path / f"{k}-{rep}.json"
            res = subprocess.run([sys.executable, "-m", "metaweil.cli", *args, "--out", str(path)],
                                 capture_output=True, text=True)
            ok &= res.returncode == 0
            outs.append(path.read_bytes())
        ok &= outs[0] == outs[1] and len(outs[0]) > 0
    dt = time.perf_counter() - t0
    assert acceptance(14, "byte-identical reruns", ok, f"{len(DETERMINISM_RUNS)} configs x 2 processes, {dt:.1f}s")
