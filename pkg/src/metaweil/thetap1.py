"""The global theta function f_P on P^1 over F_q for split bundles.

Two-chart Cech model: U0 = Spec k[x], U1 = Spec k[1/x], and O(m) has
transition x^m (a section is (s0, s1) with s0 = x^m s1).  Then

    H^0(O(m)) = polynomials of degree <= m          (exponents 0..m)
    H^1(O(m)) = Laurent monomials x^j, m < j < 0    (in the U0 frame)

and Serre duality H^1(O(m)) x H^0(O(-2-m)) -> k is the coefficient of x^{-1}.

Symmetrisation convention for the period form: with e~_ij = e~_ji = e_ij
(i <= j), b(s, s') = sum_{i,j} res(e~_ij s_j s'_i).  For n = 1 this is the
plain scalar case b(s, s') = res(e s s').
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import fqlinalg as fl
from .errors import guard
from .scalars import CycloNum, check_modulus, psi_sum
from .strata import corank, four_cone_pointwise, s_psi, s_psi_closed


def h0_dim(m: int) -> int:
    return max(0, m + 1)


def h1_dim(m: int) -> int:
    return max(0, -m - 1)


def h0_exponents(m: int) -> list[int]:
    return list(range(0, m + 1))


def h1_exponents(m: int) -> list[int]:
    return list(range(m + 1, 0))


@dataclass(frozen=True)
class CohClass:
    """A class in H^kind(P^1, O(m)); coeffs follow the basis exponents in increasing order."""

    m: int
    kind: int
    coeffs: tuple[int, ...]
    q: int

    def __post_init__(self):
        n = h0_dim(self.m) if self.kind == 0 else h1_dim(self.m)
        if self.kind not in (0, 1) or len(self.coeffs) != n:
            raise ValueError(f"H^{self.kind}(O({self.m})) has dimension {n}, got {len(self.coeffs)} coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.q for c in self.coeffs))

    @property
    def exponents(self) -> list[int]:
        return h0_exponents(self.m) if self.kind == 0 else h1_exponents(self.m)

    def terms(self) -> dict[int, int]:
        return {e: c for e, c in zip(self.exponents, self.coeffs) if c}

    @classmethod
    def monomial(cls, m: int, kind: int, exponent: int, q: int) -> "CohClass":
        exps = h0_exponents(m) if kind == 0 else h1_exponents(m)
        return cls(m, kind, tuple(int(e == exponent) for e in exps), q)


def serre_pair(alpha: CohClass, s: CohClass) -> int:
    """Residue of alpha * s: the coefficient of x^{-1}."""
    if alpha.kind != 1 or s.kind != 0:
        raise ValueError("pairing is H^1 x H^0")
    if alpha.m + s.m != -2:
        raise ValueError(f"degrees {alpha.m} and {s.m} are not Serre dual")
    q = alpha.q
    sv = s.terms()
    return sum(c * sv.get(-1 - j, 0) for j, c in alpha.terms().items()) % q


def pairing_matrix(m: int, q: int) -> list[list[int]]:
    """Serre pairing between the monomial bases of H^1(O(m)) and H^0(O(-2-m))."""
    return [[serre_pair(CohClass.monomial(m, 1, j, q), CohClass.monomial(-2 - m, 0, k, q))
             for k in h0_exponents(-2 - m)] for j in h1_exponents(m)]


@dataclass(frozen=True)
class SplitBundle:
    degrees: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.degrees)

    def v_blocks(self) -> list[list[int]]:
        """Basis exponents of V = H^0(L* (x) Omega) = sum H^0(O(-2 - a_i))."""
        return [h0_exponents(-2 - a) for a in self.degrees]

    @property
    def r(self) -> int:
        return sum(h0_dim(-2 - a) for a in self.degrees)

    def ext_degree(self, i: int, j: int) -> int:
        return self.degrees[i] + self.degrees[j] + 2

    def ext_slots(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i, self.n)]

    def ext_dim(self) -> int:
        return sum(h1_dim(self.ext_degree(i, j)) for i, j in self.ext_slots())


@dataclass(frozen=True)
class ExtClassP1:
    """Components e_ij in H^1(O(a_i + a_j + 2)), i <= j."""

    bundle: SplitBundle
    components: tuple[CohClass, ...]
    q: int

    def component(self, i: int, j: int) -> CohClass:
        if i > j:
            i, j = j, i
        return self.components[self.bundle.ext_slots().index((i, j))]

    @classmethod
    def from_vector(cls, bundle: SplitBundle, vec: Sequence[int], q: int) -> "ExtClassP1":
        comps, pos = [], 0
        for i, j in bundle.ext_slots():
            m = bundle.ext_degree(i, j)
            k = h1_dim(m)
            comps.append(CohClass(m, 1, tuple(vec[pos:pos + k]), q))
            pos += k
        if pos != len(vec):
            raise ValueError(f"expected {pos} coefficients, got {len(vec)}")
        return cls(bundle, tuple(comps), q)

    @classmethod
    def zero(cls, bundle: SplitBundle, q: int) -> "ExtClassP1":
        return cls.from_vector(bundle, [0] * bundle.ext_dim(), q)

    def vector(self) -> list[int]:
        return [c for comp in self.components for c in comp.coeffs]

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "degrees": list(self.bundle.degrees),
            "components": [
                {"i": i, "j": j, "exponents": comp.exponents, "coeffs": list(comp.coeffs)}
                for (i, j), comp in zip(self.bundle.ext_slots(), self.components)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExtClassP1":
        q = check_modulus(int(obj["q"]))
        bundle = SplitBundle(tuple(int(a) for a in obj["degrees"]))
        given = {(int(c["i"]), int(c["j"])): c["coeffs"] for c in obj.get("components", [])}
        vec = []
        for i, j in bundle.ext_slots():
            k = h1_dim(bundle.ext_degree(i, j))
            coeffs = given.get((i, j), [0] * k)
            if len(coeffs) != k:
                raise ValueError(f"component ({i},{j}) needs {k} coefficients")
            vec.extend(int(c) for c in coeffs)
        return cls.from_vector(bundle, vec, q)


def enumerate_ext_classes(bundle: SplitBundle, q: int, limit: int | None = None) -> Iterator[ExtClassP1]:
    guard(q ** bundle.ext_dim(), limit, "extension class enumeration")
    for vec in itertools.product(range(q), repeat=bundle.ext_dim()):
        yield ExtClassP1.from_vector(bundle, vec, q)


# -- the period form -----------------------------------------------------------

@dataclass(frozen=True)
class PeriodForm:
    b: tuple[tuple[int, ...], ...]
    r: int
    q: int


def period_form(L: SplitBundle, e: ExtClassP1) -> PeriodForm:
    q = e.q
    index = [(i, k) for i, exps in enumerate(L.v_blocks()) for k in exps]
    r = len(index)
    b = [[0] * r for _ in range(r)]
    for u, (i, k) in enumerate(index):
        for v, (j, l) in enumerate(index):
            comp = e.component(i, j)
            s_prod = CohClass.monomial(-comp.m - 2, 0, k + l, q) if k + l <= -comp.m - 2 else None
            b[u][v] = serre_pair(comp, s_prod) if s_prod is not None else 0
    return PeriodForm(tuple(tuple(row) for row in b), r, q)


def _sections(L: SplitBundle, q: int) -> list[np.ndarray]:
    """All s in V, as per-summand coefficient arrays over the exponents 0..deg."""
    blocks = L.v_blocks()
    r = sum(len(b) for b in blocks)
    allv = np.array(list(fl.vectors(r, q)), dtype=np.int64).reshape(-1, r)
    out, pos = [], 0
    for exps in blocks:
        out.append(allv[:, pos:pos + len(exps)])
        pos += len(exps)
    return out


def quadratic_values(L: SplitBundle, e: ExtClassP1, half: bool = False) -> np.ndarray:
    """q^F(s) = <e, s (x) s> for every s in V, by Laurent multiplication and residues."""
    q = e.q
    secs = _sections(L, q)
    total = np.zeros(len(secs[0]) if secs else 1, dtype=np.int64)
    for i in range(L.n):
        for j in range(L.n):
            comp = e.component(i, j)
            si, sj = secs[i], secs[j]
            if si.shape[1] == 0 or sj.shape[1] == 0:
                continue
            # product polynomial s_i * s_j, exponents 0..deg_i+deg_j
            prod = np.zeros((len(si), si.shape[1] + sj.shape[1] - 1), dtype=np.int64)
            for k in range(si.shape[1]):
                prod[:, k:k + sj.shape[1]] += si[:, k:k + 1] * sj
            for ex, c in comp.terms().items():
                n = -1 - ex
                if 0 <= n < prod.shape[1]:
                    total += c * prod[:, n]
    total %= q
    if half:
        total = total * pow(2, -1, q) % q
    return total


def f_p(L: SplitBundle, e: ExtClassP1, half: bool = False, limit: int | None = None) -> CycloNum:
    """sum over s in Hom(L, Omega) of psi(q^F(s)).

    half=True inserts the factor 1/2 in front of the pairing; the default
    convention makes f_p equal to s_psi of the period form.
    """
    guard(e.q ** L.r, limit, "Hom(L, Omega) enumeration")
    vals = quadratic_values(L, e, half)
    counts = np.bincount(vals, minlength=e.q)
    return psi_sum([int(c) for c in counts], e.q)


# -- H^0 of the extension by gluing ---------------------------------------------

Laurent = dict  # exponent -> coefficient


def _transition(L: SplitBundle, e: ExtClassP1) -> list[list[Laurent]]:
    """g(x) with sigma0 = g sigma1: [[x^a, C], [0, x^{-a-2}]], C_ij = e~_ij x^{-a_j-2}."""
    n = L.n
    g = [[{} for _ in range(2 * n)] for _ in range(2 * n)]
    for i, a in enumerate(L.degrees):
        g[i][i] = {a: 1}
        g[n + i][n + i] = {-a - 2: 1}
    for i in range(n):
        for j in range(n):
            shift = -L.degrees[j] - 2
            g[i][n + j] = {ex + shift: c for ex, c in e.component(i, j).terms().items()}
    return g


def h0_glued(g: Sequence[Sequence[Laurent]], q: int, depth: int) -> int:
    """dim of {sigma1 in k[1/x]^r, exponents >= -depth : g sigma1 has no negative exponents}."""
    r = len(g)
    unknowns = [(c, -k) for c in range(r) for k in range(depth + 1)]
    rows: dict[tuple[int, int], list[int]] = {}
    for col, (c, ex1) in enumerate(unknowns):
        for row in range(r):
            for ex, coef in g[row][c].items():
                tot = ex + ex1
                if tot < 0:
                    rows.setdefault((row, tot), [0] * len(unknowns))[col] += coef
    eqs = [[x % q for x in v] for v in rows.values()]
    return len(unknowns) - (fl.rank(eqs, q) if eqs else 0)


def h0_line(m: int, q: int) -> int:
    return h0_glued([[{m: 1}]], q, depth=abs(m) + 2)


def h0_of_M(L: SplitBundle, e: ExtClassP1) -> int:
    """dim H^0(P^1, M) for the extension 0 -> L -> M -> L* (x) Omega -> 0 classified by e."""
    depth = 2 * max([abs(a) for a in L.degrees] + [1]) + 4
    return h0_glued(_transition(L, e), e.q, depth)


# -- sweeps ----------------------------------------------------------------------

def bundles(n: int, min_deg: int, max_deg: int = -2) -> list[SplitBundle]:
    """Split bundles with min_deg <= a_1 <= ... <= a_n <= max_deg."""
    return [SplitBundle(tuple(c)) for c in itertools.combinations_with_replacement(range(min_deg, max_deg + 1), n)]


def theta_record(L: SplitBundle, e: ExtClassP1, half: bool = False) -> dict:
    q = e.q
    pf = period_form(L, e)
    fp = f_p(L, e, half)
    b = pf.b
    if half:
        h = pow(2, -1, q)
        b = tuple(tuple(x * h % q for x in row) for row in b)
    i = corank(b, q) if pf.r else 0
    h0 = h0_of_M(L, e)
    closed = s_psi_closed(b, q) if pf.r else CycloNum.one(fp.N)
    direct = s_psi(b, q) if pf.r else CycloNum.one(fp.N)
    sg = four_cone_pointwise(pf.r % 2, b, q) if pf.r else CycloNum.one(fp.N)
    ss = four_cone_pointwise((pf.r + 1) % 2, b, q) if pf.r else CycloNum.zero(fp.N)
    parity_ok = (fp == sg + ss) and (ss.is_zero() if i % 2 == 0 else sg.is_zero())
    checks = {
        "f_p=s_psi(period_form)": fp == direct,
        "s_psi=closed_form": direct == closed,
        "h0_of_M=corank": h0 == i,
        "weight": fp * fp.conj() == q ** (pf.r + i),
        "parity_split": parity_ok,
    }
    return {
        "degrees": list(L.degrees),
        "ext": e.vector(),
        "r": pf.r,
        "period_form": [list(row) for row in b],
        "corank": i,
        "h0_of_M": h0,
        "f_p": fp.to_json(),
        "closed_form": closed.to_json(),
        "checks": checks,
    }


def enumerate_bunp_slice(n: int, min_deg: int, q: int, limit: int | None = None,
                         half: bool = False) -> Iterator[dict]:
    """Records for every split L with a_i in [min_deg, -2] and every extension class."""
    check_modulus(q)
    if min_deg > -2:
        raise ValueError("degrees must be <= -2")
    bl = bundles(n, min_deg)
    guard(sum(q ** L.ext_dim() for L in bl), limit, "Bun_P slice")
    for L in bl:
        for e in enumerate_ext_classes(L, q, limit):
            yield theta_record(L, e, half)


def load_ext(path: str) -> ExtClassP1:
    with open(path) as fh:
        return ExtClassP1.from_json(json.load(fh))
