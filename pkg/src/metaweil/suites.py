"""Verification suites and table dumps behind the command line.

Every suite returns a Report whose JSON form depends only on the RunConfig:
sampling uses a seeded numpy generator and all enumerations are sorted.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import maslov, strata, thetap1, weilrep
from .errors import LimitExceeded
from .heisenberg import equivariant_span_rank, heisenberg_elements, intertwiner, scalar_of
from .scalars import CycloNum, check_modulus, cyclo_order, legendre, root_of_unity_exponent
from .symplectic import (
    GroupElem, Lagrangian, SympSpace, enumerate_lagrangians, generators, intersection_dim,
    siegel_parabolic, standard_lagrangian, symplectic_group, transverse, weyl_element,
)

SUITES = ("maslov-identities", "cocycle", "weil", "strata", "p1")
TABLES = ("gamma", "theta", "cocycle", "strata-fn")

EXHAUSTIVE_MAX = 5000


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    suite: str = ""
    q: int = 3
    d: int = 1
    n: int = 1
    min_deg: int = -3
    limit: int | None = None
    seed: int = 0
    samples: int = 500
    fn: str = "s"

    def __post_init__(self):
        try:
            check_modulus(self.q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.limit is not None and self.limit <= 0:
            raise UsageError("limit must be positive")
        if self.d < 1 or self.n < 1 or self.samples < 1:
            raise UsageError("d, n and samples must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass
class Check:
    name: str
    passed: bool
    count: int
    counterexample: Any = None
    note: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "count": self.count}
        if self.note:
            out["note"] = self.note
        if not self.passed:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class Report:
    suite: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        # timing is kept out so that reruns are byte-identical
        return {
            "suite": self.suite,
            "params": self.params,
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
            "counts": self.counts,
        }

    def run(self, name: str, fn: Callable[[], Check]) -> Check:
        t = time.perf_counter()
        chk = fn()
        chk.name = name
        self.timing[name] = time.perf_counter() - t
        self.checks.append(chk)
        return chk


def _first_failure(items, pred, count=None) -> Check:
    n = 0
    for item in items:
        n += 1
        bad = pred(item)
        if bad is not None:
            return Check("", False, n, bad)
    return Check("", True, n if count is None else count)


def _lag(L: Lagrangian) -> list:
    return L.to_json()


def _g(g: GroupElem) -> list:
    return g.to_json()


def _sample(items: list, k: int, rng: np.random.Generator) -> list:
    if len(items) <= k:
        return list(items)
    idx = sorted(rng.choice(len(items), size=k, replace=False).tolist())
    return [items[i] for i in idx]


def _triples(lags, cfg: RunConfig, rng, pred=lambda t: True):
    total = len(lags) ** 3
    if total <= EXHAUSTIVE_MAX:
        return [t for t in itertools.product(lags, repeat=3) if pred(t)], True
    out = []
    while len(out) < cfg.samples:
        t = tuple(lags[i] for i in rng.integers(0, len(lags), 3))
        if pred(t):
            out.append(t)
    return out, False


def _valid(t) -> bool:
    L1, L2, V = t
    return transverse(V, L1) and transverse(V, L2)


def random_group_elements(d: int, q: int, count: int, rng, length: int = 12) -> list[GroupElem]:
    gens = generators(d, q)
    out = []
    for _ in range(count):
        g = GroupElem.identity(d, q)
        for k in rng.integers(0, len(gens), length):
            g = g @ gens[int(k)]
        out.append(g)
    return out


# -- suites ---------------------------------------------------------------------

def suite_maslov(cfg: RunConfig) -> Report:
    d, q = cfg.d, cfg.q
    rng = cfg.rng()
    rep = Report("maslov-identities", {"d": d, "q": q, "seed": cfg.seed, "samples": cfg.samples})
    lags = list(enumerate_lagrangians(SympSpace(d, q), cfg.limit))
    valid, exhaustive = _triples(lags, cfg, rng, _valid)
    rep.counts = {"lagrangians": len(lags), "valid_triples": len(valid), "exhaustive": exhaustive}

    def theta_sq(t):
        L1, L2, V = t
        th = maslov.theta_triple(L1, L2, V)  # ThetaValue asserts the identity on construction
        return None if th.value * th.value == maslov.theta_squared(d, th.i, q) else [_lag(x) for x in t]

    def bridge(t):
        th = maslov.theta_triple(*t).value
        gs = maslov.theta_gauss(*t)
        return None if th == gs else {"triple": [_lag(x) for x in t], "theta": th.to_json(), "gauss": gs.to_json()}

    rep.run("theta_squared", lambda: _first_failure(valid, theta_sq))
    rep.run("gauss_bridge", lambda: _first_failure(valid, bridge))

    pairs = list(itertools.product(lags, repeat=2))
    if len(pairs) > EXHAUSTIVE_MAX:
        pairs = _sample(pairs, cfg.samples, rng)

    def constant(p):
        A, B = p
        c = scalar_of(intertwiner(B, A) @ intertwiner(A, B))
        return None if c == q ** (d + intersection_dim(A, B)) else {"pair": [_lag(A), _lag(B)], "scalar": c.to_json()}

    rep.run("intertwiner_constant", lambda: _first_failure(pairs, constant))

    gam = lambda a, b, c: maslov.gamma(a, b, c).value
    trip_all = list(itertools.product(lags, repeat=3))
    if len(trip_all) > EXHAUSTIVE_MAX:
        trip_all = [tuple(lags[i] for i in rng.integers(0, len(lags), 3)) for _ in range(cfg.samples)]

    def antisym(t):
        L1, L2, L3 = t
        g = gam(L1, L2, L3)
        ok = g * gam(L1, L3, L2) == 1 and g * gam(L2, L1, L3) == 1
        return None if ok else [_lag(x) for x in t]

    rep.run("gamma_antisymmetry", lambda: _first_failure(trip_all, antisym))

    if d == 1:
        group = list(symplectic_group(d, q, cfg.limit))
        inv_trips = _sample(trip_all, min(len(trip_all), 64), rng)
    else:
        group = random_group_elements(d, q, 20, rng)
        inv_trips = _sample(trip_all, 25, rng)

    def invariance(item):
        g, (L1, L2, L3) = item
        ok = gam(L1.act(g), L2.act(g), L3.act(g)) == gam(L1, L2, L3)
        return None if ok else {"g": _g(g), "triple": [_lag(x) for x in (L1, L2, L3)]}

    rep.run("gamma_invariance", lambda: _first_failure(itertools.product(group, inv_trips), invariance))

    quads = list(itertools.product(lags, repeat=4))
    if len(quads) > EXHAUSTIVE_MAX:
        quads = [tuple(lags[i] for i in rng.integers(0, len(lags), 4)) for _ in range(cfg.samples)]

    def quad(t):
        L1, L2, L3, L4 = t
        ok = gam(L1, L2, L3) * gam(L1, L4, L2) == gam(L3, L4, L2) * gam(L1, L4, L3)
        return None if ok else [_lag(x) for x in t]

    rep.run("gamma_quadruple", lambda: _first_failure(quads, quad))

    def descent(p):
        L1, L2 = p
        vals = {maslov.theta_triple(L1, L2, V).value for V in lags if transverse(V, L1) and transverse(V, L2)}
        ok = len(vals) <= 1 or (len(vals) == 2 and sum(vals, CycloNum.zero(cyclo_order(q))).is_zero())
        return None if ok else {"pair": [_lag(L1), _lag(L2)], "values": sorted(v.to_json()["coeffs"] for v in vals)}

    desc_pairs = list(itertools.product(lags, repeat=2))
    if len(desc_pairs) > 200:
        desc_pairs = _sample(desc_pairs, 50, rng)
    rep.run("theta_two_sheeted", lambda: _first_failure(desc_pairs, descent))

    transverse3 = [t for t in valid if transverse(t[0], t[1])]

    def via_gamma(t):
        return None if maslov.theta_from_gamma(*t) == maslov.theta_triple(*t).value else [_lag(x) for x in t]

    rep.run("theta_from_gamma", lambda: _first_failure(transverse3, via_gamma))
    return rep


def _exponents(table: dict, keys: list, N: int) -> np.ndarray:
    out = np.empty(len(keys), dtype=np.int64)
    for k, key in enumerate(keys):
        e = root_of_unity_exponent(table[key])
        if e is None:
            raise ArithmeticError(f"cocycle value at {key} is not a root of unity")
        out[k] = e
    return out


def cocycle_identity_counterexample(table: dict, group: list[GroupElem], N: int):
    """Exhaustive c(a,b) c(ab,c) = c(b,c) c(a,bc) on exponent arrays."""
    n = len(group)
    index = {g: k for k, g in enumerate(group)}
    E = _exponents(table, [(a, b) for a in group for b in group], N).reshape(n, n)
    mul = np.array([[index[a @ b] for b in group] for a in group], dtype=np.int64)
    for i in range(n):
        lhs = E[i][:, None] + E[mul[i]]           # [j, k]: c(a,b) + c(ab, c)
        rhs = E + E[i][mul]                         # c(b,c) + c(a, bc)
        bad = np.argwhere((lhs - rhs) % N)
        if len(bad):
            j, k = bad[0]
            return [_g(group[i]), _g(group[j]), _g(group[k])]
    return None


def cocycle_tables(d: int, q: int, limit=None):
    group = sorted(symplectic_group(d, q, limit))
    L0 = standard_lagrangian(d, q)
    return group, L0, maslov.cocycle_table(group, L0), weilrep.operator_cocycle_table(group, L0)


def suite_cocycle(cfg: RunConfig) -> Report:
    d, q = cfg.d, cfg.q
    N = cyclo_order(q)
    rep = Report("cocycle", {"d": d, "q": q})
    group, L0, gam, op = cocycle_tables(d, q, cfg.limit)
    rep.counts = {"group_order": len(group), "pairs": len(group) ** 2, "triples": len(group) ** 3}

    def ident(table):
        bad = cocycle_identity_counterexample(table, group, N)
        return Check("", bad is None, len(group) ** 3, bad)

    rep.run("gamma_cocycle_identity", lambda: ident(gam))
    rep.run("operator_cocycle_identity", lambda: ident(op))
    rep.run("operator_equals_gamma", lambda: _first_failure(
        gam, lambda k: None if gam[k] == op[k] else {"g1": _g(k[0]), "g2": _g(k[1])}))
    rep.run("fourth_root", lambda: _first_failure(
        op, lambda k: None if op[k] ** 4 == 1 else {"g1": _g(k[0]), "g2": _g(k[1]), "value": op[k].to_json()}))

    def split():
        s = weilrep.find_splitting(op, group, generators(d, q))
        if s is None:
            return Check("", False, 0, "no splitting found")
        bad = weilrep.verify_splitting(op, s, group)
        return Check("", bad is None, len(group) ** 2, bad and [_g(x) for x in bad])

    rep.run("splitting", split)
    return rep


def suite_weil(cfg: RunConfig) -> Report:
    d, q = cfg.d, cfg.q
    rng = cfg.rng()
    N = cyclo_order(q)
    V = standard_lagrangian(d, q)
    rep = Report("weil", {"d": d, "q": q, "seed": cfg.seed})
    if d == 1:
        group = sorted(symplectic_group(d, q, cfg.limit))
        hs = list(heisenberg_elements(d, q))
        exhaustive = True
    else:
        group = random_group_elements(d, q, 12, rng)
        hs = weilrep.random_heisenberg(d, q, 12, rng)
        exhaustive = False
    parab = sorted(siegel_parabolic(d, q, cfg.limit))
    rep.counts = {"group_elements": len(group), "heisenberg_elements": len(hs),
                  "parabolic_order": len(parab), "exhaustive": exhaustive}

    def intertw(item):
        g, h = item
        return None if weilrep.weil_operator(g, V).intertwines(h) else {"g": _g(g), "h": [list(h.m), h.a]}

    rep.run("intertwining", lambda: _first_failure(itertools.product(group, hs), intertw))

    comp = group if d == 1 else group[:6]

    def law(p):
        g1, g2 = p
        lhs = weilrep.translate_op(g1, V.act(g2)) @ weilrep.translate_op(g2, V)
        return None if lhs == weilrep.translate_op(g1 @ g2, V) else [_g(g1), _g(g2)]

    rep.run("translation_composition", lambda: _first_failure(itertools.product(comp, comp), law))

    def parab_hom():
        bad = weilrep.parabolic_homomorphism_counterexample(parab)
        return Check("", bad is None, len(parab) ** 2, bad and [_g(x) for x in bad])

    rep.run("parabolic_homomorphism", parab_hom)

    def parab_ratio():
        ratio = {p: scalar_of(weilrep.weil_operator(p, V).op @ weilrep.schrodinger_upper(p.inverse()))
                 for p in parab}
        index = {p: k for k, p in enumerate(parab)}
        E = _exponents(ratio, parab, N)
        mul = np.array([[index[a @ b] for b in parab] for a in parab], dtype=np.int64)
        bad = np.argwhere((E[:, None] + E[None, :] - E[mul]) % N)
        if len(bad):
            return Check("", False, len(parab) ** 2, [_g(parab[bad[0][0]]), _g(parab[bad[0][1]])])
        trivial = all(ratio[p] == 1 for p in parab)
        return Check("", True, len(parab) ** 2, note="ratio identically 1" if trivial else "nontrivial character")

    rep.run("parabolic_ratio_multiplicative", parab_ratio)

    def weyl():
        w = weyl_element(d, q)
        c = scalar_of(weilrep.schrodinger_weyl(w) @ weilrep.weil_inverse(w, V))
        return Check("", c * c.conj() == 1, 1, {"scalar": c.to_json()}, note="scalar 1" if c == 1 else "scalar of unit modulus")

    rep.run("weyl_proportional_unit", weyl)

    def svn():
        r = equivariant_span_rank(V)
        return Check("", r == q ** (2 * d), 1, {"rank": r, "expected": q ** (2 * d)})

    rep.run("stone_von_neumann_rank", svn)

    def theta_norm():
        w = weyl_element(d, q)
        one = weilrep.theta_fn(GroupElem.identity(d, q), V)
        tw = weilrep.theta_fn(w, V)
        target = CycloNum.from_rational(N, 1) / q ** d
        ok = one == 1 and tw * tw.conj() == target
        return Check("", ok, 2, {"theta_identity": one.to_json(), "theta_weyl": tw.to_json()})

    rep.run("theta_normalisation", theta_norm)

    outer = group if d == 1 else group[:4]
    pp = parab if len(parab) <= 12 else _sample(parab, 6, rng)

    def bi_inv(item):
        g, p1, p2 = item
        op = weilrep.schrodinger_upper(p1) @ weilrep.weil_operator(g, V).op @ weilrep.schrodinger_upper(p2)
        return None if weilrep.theta_of_op(op) == weilrep.theta_fn(g, V) else [_g(g), _g(p1), _g(p2)]

    rep.run("theta_bi_invariance", lambda: _first_failure(itertools.product(outer, pp, pp), bi_inv))
    return rep


def suite_strata(cfg: RunConfig) -> Report:
    d, q = cfg.d, cfg.q
    rep = Report("strata", {"d": d, "q": q})
    forms = strata.all_symmetric(d, q)
    rep.counts = {"forms": len(forms), "strata": {str(k): v for k, v in strata.stratum_sizes(d, q).items()}}
    mat = lambda b: [list(r) for r in b]

    rep.run("s_psi_closed_form", lambda: _first_failure(
        forms, lambda b: None if strata.s_psi(b, q) == strata.s_psi_closed(b, q) else mat(b)))
    rep.run("conjugate_product", lambda: _first_failure(
        forms, lambda b: None if strata.squared_identity(b, q).conjugate_product_ok else mat(b)))
    if legendre(-1, q) == 1:
        rep.run("plain_square", lambda: _first_failure(
            forms, lambda b: None if strata.squared_identity(b, q).plain_square_ok else mat(b)))

    def lines(b):
        i = strata.corank(b, q)
        return None if strata.kernel_line_count(b, q) == (q ** i - 1) // (q - 1) else mat(b)

    rep.run("kernel_line_count", lambda: _first_failure(forms, lines))

    cf = strata.cone_functions(d, q, cfg.limit)
    rep.run("cone_decomposition", lambda: _first_failure(
        range(len(forms)), lambda k: None if cf.N.values[k] == cf.l0.values[k] + cf.l1.values[k] else mat(forms[k])))

    for i in (0, 1):
        def par(i=i):
            r = strata.parity_support(i, d, q, cfg.limit)
            return Check("", r.passed, len(forms), r.counterexample)
        rep.run(f"parity_support_l{i}", par)

    def inversion():
        for f in (cf.l0, cf.l1):
            F = strata.four_psi(f, limit=cfg.limit)
            back = strata.four_psi(F, inverse=True, limit=cfg.limit)
            if back.values != f.values:
                return Check("", False, len(forms), "inverse transform mismatch")
            twice = strata.four_psi(F, limit=cfg.limit)
            neg = [f(tuple(tuple(-x % q for x in r) for r in t)) for t in f.points()]
            if twice.values != neg:
                return Check("", False, len(forms), "double transform is not f(-t)")
        return Check("", True, 2 * len(forms))

    rep.run("fourier_inversion", inversion)

    def even_odd():
        sg, ss = strata.even_odd_parts(d, q, cfg.limit)
        for k, b in enumerate(forms):
            s = strata.s_psi(b, q)
            if s != sg.values[k] + ss.values[k] or (not sg.values[k].is_zero() and not ss.values[k].is_zero()):
                return Check("", False, k + 1, mat(b))
        return Check("", True, len(forms))

    rep.run("even_odd_split", even_odd)
    return rep


def suite_p1(cfg: RunConfig) -> Report:
    q = cfg.q
    rep = Report("p1", {"n": cfg.n, "min_deg": cfg.min_deg, "q": q})
    rr = list(range(cfg.min_deg - 2, 4))
    rep.run("riemann_roch_lines", lambda: _first_failure(
        rr, lambda m: None if thetap1.h0_line(m, q) == max(0, m + 1) else {"m": m}))
    records = list(thetap1.enumerate_bunp_slice(cfg.n, cfg.min_deg, q, cfg.limit))
    rep.counts = {"records": len(records),
                  "bundles": [list(L.degrees) for L in thetap1.bundles(cfg.n, cfg.min_deg)]}
    names = list(records[0]["checks"]) if records else []
    for name in names:
        rep.run(name, lambda name=name: _first_failure(
            records, lambda r: None if r["checks"][name] else {"degrees": r["degrees"], "ext": r["ext"]}))
    return rep


RUNNERS = {
    "maslov-identities": suite_maslov,
    "cocycle": suite_cocycle,
    "weil": suite_weil,
    "strata": suite_strata,
    "p1": suite_p1,
}


def run_suite(cfg: RunConfig) -> Report:
    if cfg.suite not in RUNNERS:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    return RUNNERS[cfg.suite](cfg)


# -- tables --------------------------------------------------------------------

def gamma_table(d: int, q: int, limit=None) -> list[dict]:
    lags = enumerate_lagrangians(SympSpace(d, q), limit)
    return [{"triple": [_lag(x) for x in t], "value": maslov.gamma(*t).value.to_json()}
            for t in itertools.product(lags, repeat=3)]


def theta_table(d: int, q: int, limit=None) -> list[dict]:
    lags = enumerate_lagrangians(SympSpace(d, q), limit)
    out = []
    for t in itertools.product(lags, repeat=3):
        if _valid(t):
            th = maslov.theta_triple(*t)
            out.append({"triple": [_lag(x) for x in t], "i": th.i, "value": th.value.to_json()})
    return out


def cocycle_dump(d: int, q: int, limit=None) -> dict:
    group, L0, _, op = cocycle_tables(d, q, limit)
    s = weilrep.find_splitting(op, group, generators(d, q))
    return {
        "base": _lag(L0),
        "table": [{"g1": _g(a), "g2": _g(b), "value": op[a, b].to_json()} for a in group for b in group],
        "splitting": None if s is None else [{"g": _g(g), "value": s[g].to_json()} for g in group],
    }


def dump_table(name: str, cfg: RunConfig):
    if name == "gamma":
        return gamma_table(cfg.d, cfg.q, cfg.limit)
    if name == "theta":
        return theta_table(cfg.d, cfg.q, cfg.limit)
    if name == "cocycle":
        return cocycle_dump(cfg.d, cfg.q, cfg.limit)
    if name == "strata-fn":
        if cfg.fn not in strata.STRATA_TABLES:
            raise UsageError(f"unknown strata function {cfg.fn!r}")
        return strata.table(cfg.fn, cfg.d, cfg.q, cfg.limit).to_json()
    raise UsageError(f"unknown table {name!r}; choose from {', '.join(TABLES)}")


__all__ = [
    "SUITES", "TABLES", "RunConfig", "Check", "Report", "UsageError", "run_suite", "dump_table",
    "LimitExceeded", "cocycle_identity_counterexample", "random_group_elements",
]
