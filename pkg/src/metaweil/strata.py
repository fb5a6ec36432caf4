"""Rank strata of symmetric forms over F_q and the Gauss-sum calculus on them.

Forms b (elements of Sym^2 V*) and tensors t (elements of Sym^2 V) are both
symmetric d x d matrices; they pair by <t, b> = sum_ij t_ij b_ij, so that
<v v^T, b> = v^T b v.  The quadratic form attached to b is always
beta_b(v) = v^T b v, without a factor 1/2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import fqlinalg as fl
from .errors import guard
from .scalars import CycloNum, basis, cyclo_order, gauss_sum, legendre, psi_sum, sqrt_q_power

FORMS = "forms"
TENSORS = "tensors"

SymMatrix = tuple[tuple[int, ...], ...]


def sym_dim(d: int) -> int:
    return d * (d + 1) // 2


def _slots(d: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(d) for j in range(i, d)]


def from_upper(vals: Sequence[int], d: int) -> SymMatrix:
    m = [[0] * d for _ in range(d)]
    for (i, j), x in zip(_slots(d), vals):
        m[i][j] = m[j][i] = int(x)
    return tuple(tuple(r) for r in m)


def upper(b: Sequence[Sequence[int]]) -> tuple[int, ...]:
    return tuple(b[i][j] for i, j in _slots(len(b)))


@lru_cache(maxsize=None)
def all_symmetric(d: int, q: int) -> tuple[SymMatrix, ...]:
    """Every symmetric d x d matrix, lexicographic in the upper-triangular entries."""
    return tuple(from_upper(v, d) for v in itertools.product(range(q), repeat=sym_dim(d)))


def sym_index(b: Sequence[Sequence[int]], q: int) -> int:
    return fl.index_of(upper(b), q)


@lru_cache(maxsize=None)
def _upper_array(d: int, q: int) -> np.ndarray:
    return np.array([upper(b) for b in all_symmetric(d, q)], dtype=np.int64).reshape(-1, sym_dim(d))


@dataclass(frozen=True)
class SymForm:
    mat: SymMatrix
    q: int

    def __post_init__(self):
        m = tuple(tuple(int(x) % self.q for x in row) for row in self.mat)
        if any(m[i][j] != m[j][i] for i in range(len(m)) for j in range(len(m))):
            raise ValueError("matrix is not symmetric")
        object.__setattr__(self, "mat", m)

    @property
    def d(self) -> int:
        return len(self.mat)


@dataclass
class StrataFn:
    """A function on all of Sym^2 (forms or tensors), stored in enumeration order."""

    d: int
    q: int
    side: str
    values: list[CycloNum] = field(repr=False)

    def __call__(self, b) -> CycloNum:
        return self.values[sym_index(b, self.q)]

    def points(self) -> tuple[SymMatrix, ...]:
        return all_symmetric(self.d, self.q)

    def items(self):
        return zip(self.points(), self.values)

    def __eq__(self, other):
        return (isinstance(other, StrataFn) and (self.d, self.q, self.side) == (other.d, other.q, other.side)
                and self.values == other.values)

    def to_json(self) -> list[dict]:
        return [{"mat": [list(r) for r in m], "value": v.to_json()} for m, v in self.items()]


def _table(d: int, q: int, side: str, fn: Callable[[SymMatrix], CycloNum], limit=None) -> StrataFn:
    guard(q ** sym_dim(d), limit, "symmetric matrix enumeration")
    return StrataFn(d, q, side, [fn(b) for b in all_symmetric(d, q)])


# -- rank and congruence -----------------------------------------------------

def corank(b, q: int | None = None) -> int:
    """d - rank(b)."""
    if isinstance(b, SymForm):
        b, q = b.mat, b.q
    return len(b) - fl.rank(b, q) if len(b) else 0


corank_q = corank


def diagonalize(b: Sequence[Sequence[int]], q: int) -> list[int]:
    """Diagonal entries of a form congruent to b (symmetric Gaussian elimination).

    Pivot rule: first nonzero diagonal entry; otherwise the first nonzero
    off-diagonal entry b_ij, made diagonal by replacing e_i with e_i + e_j.
    """
    m = [list(r) for r in fl.mat(b, q)]
    n = len(m)
    diag = []
    for k in range(n):
        piv = next((j for j in range(k, n) if m[j][j]), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j]), None)
            if off is None:
                diag.extend([0] * (n - k))
                return diag
            i, j = off
            # e_i <- e_i + e_j : row_i += row_j, col_i += col_j
            m[i] = [(x + y) % q for x, y in zip(m[i], m[j])]
            for r in range(n):
                m[r][i] = (m[r][i] + m[r][j]) % q
            piv = i
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            for r in range(n):
                m[r][k], m[r][piv] = m[r][piv], m[r][k]
        inv = pow(m[k][k], -1, q)
        for j in range(k + 1, n):
            if m[j][k]:
                c = m[j][k] * inv % q
                m[j] = [(x - c * y) % q for x, y in zip(m[j], m[k])]
                for r in range(n):
                    m[r][j] = (m[r][j] - c * m[r][k]) % q
        diag.append(m[k][k])
    return diag


def discriminant_class(b: Sequence[Sequence[int]], q: int) -> int:
    """Legendre symbol of the determinant of the nondegenerate part (1 for b = 0)."""
    prod = 1
    for x in diagonalize(b, q):
        if x:
            prod = prod * x % q
    return legendre(prod, q)


def congruence_invariant(b, q: int) -> tuple[int, int]:
    return corank_q(b, q), discriminant_class(b, q)


def congruent(b, a, q: int) -> SymMatrix:
    """a^T b a."""
    m = fl.matmul(fl.matmul(fl.transpose(a), b, q), a, q)
    return tuple(tuple(r) for r in m)


# -- character sums ----------------------------------------------------------

def _quad_values(b: Sequence[Sequence[int]], q: int) -> np.ndarray:
    d = len(b)
    vs = np.array(list(fl.vectors(d, q)), dtype=np.int64).reshape(-1, d)
    B = np.array(b, dtype=np.int64).reshape(d, d)
    return np.einsum("ki,ij,kj->k", vs, B, vs) % q


def s_psi(b, q: int | None = None, inverse: bool = False) -> CycloNum:
    """sum over v in V of psi(v^T b v)."""
    if isinstance(b, SymForm):
        b, q = b.mat, b.q
    counts = np.bincount(_quad_values(b, q), minlength=q)
    return psi_sum([int(c) for c in counts], q, inverse)


def s_psi_closed(b, q: int | None = None) -> CycloNum:
    """q^i g^{d-i} (disc/q) from a congruence diagonalisation of b."""
    if isinstance(b, SymForm):
        b, q = b.mat, b.q
    d = len(b)
    diag = diagonalize(b, q)
    i = diag.count(0)
    disc = 1
    for x in diag:
        if x:
            disc = disc * x % q
    return gauss_sum(q) ** (d - i) * (q ** i * legendre(disc, q))


# -- the cone {v v^T} ----------------------------------------------------------

def _outer_index(d: int, q: int) -> np.ndarray:
    vs = np.array(list(fl.vectors(d, q)), dtype=np.int64).reshape(-1, d)
    slots = _slots(d)
    coords = np.stack([vs[:, i] * vs[:, j] % q for i, j in slots], axis=1)
    idx = np.zeros(len(vs), dtype=np.int64)
    for k in range(coords.shape[1]):
        idx = idx * q + coords[:, k]
    return idx


def cone_l1_value(t: Sequence[Sequence[int]], q: int) -> int:
    """legendre(lambda) for t = lambda u u^T of rank one, 0 otherwise."""
    if fl.rank(t, q) != 1:
        return 0
    k = next(i for i in range(len(t)) if t[i][i] % q)
    return legendre(t[k][k], q)


@dataclass
class ConeFunctions:
    l0: StrataFn
    l1: StrataFn
    N: StrataFn


def cone_functions(d: int, q: int, limit: int | None = None) -> ConeFunctions:
    guard(q ** sym_dim(d), limit, "symmetric matrix enumeration")
    Nc = cyclo_order(q)
    counts = np.bincount(_outer_index(d, q), minlength=q ** sym_dim(d))
    pts = all_symmetric(d, q)
    l0 = [CycloNum.from_rational(Nc, int(fl.rank(t, q) <= 1)) for t in pts]
    l1 = [CycloNum.from_rational(Nc, cone_l1_value(t, q)) for t in pts]
    nn = [CycloNum.from_rational(Nc, int(c)) for c in counts]
    return ConeFunctions(StrataFn(d, q, TENSORS, l0), StrataFn(d, q, TENSORS, l1), StrataFn(d, q, TENSORS, nn))


# -- Fourier transform ---------------------------------------------------------

@lru_cache(maxsize=8)
def _pairing_matrix(d: int, q: int) -> np.ndarray:
    U = _upper_array(d, q)
    w = np.array([1 if i == j else 2 for i, j in _slots(d)], dtype=np.int64)
    return (U * w) @ U.T % q


@lru_cache(maxsize=None)
def _mult_by_zeta(N: int) -> np.ndarray:
    """M[k] (deg x deg) with coeffs(zeta^k x) = coeffs(x) @ M[k]."""
    B = basis(N)
    deg = B.deg
    out = np.zeros((N, deg, deg), dtype=np.int64)
    for k in range(N):
        for j in range(deg):
            out[k, j] = B.xpow[(j + k) % N]
    return out


def four_psi(f: StrataFn, inverse: bool = False, limit: int | None = None) -> StrataFn:
    """(Four f)(b) = q^{-D/2} sum_t psi(<t, b>) f(t), D = d(d+1)/2."""
    d, q = f.d, f.q
    D = sym_dim(d)
    guard(q ** (2 * D), limit, "Fourier transform kernel")
    N = cyclo_order(q)
    P = _pairing_matrix(d, q)
    if inverse:
        P = (-P) % q
    den = 1
    for v in f.values:
        den = math.lcm(den, v.den)
    F = np.array([[c * (den // v.den) for c in v.num] for v in f.values], dtype=object)
    Z = _mult_by_zeta(N).astype(object)
    out = np.zeros((len(f.values), basis(N).deg), dtype=object)
    for k in range(q):
        mask = (P == k).astype(object)
        out = out + (mask.T @ F) @ Z[4 * k % N]
    scale = sqrt_q_power(q, -D)
    vals = [CycloNum(N, [int(x) for x in row], den) * scale for row in out]
    side = TENSORS if f.side == FORMS else FORMS
    return StrataFn(d, q, side, vals)


def four_cone_pointwise(i: int, b: Sequence[Sequence[int]], q: int) -> CycloNum:
    """q^{D/2} Four(l_i)(b), summing only over the rank <= 1 cone t = lambda u u^T."""
    from .fqlinalg import projective_points
    d = len(b)
    counts = [0] * q
    # t = 0 contributes l_i(0)
    n_cone_zero = 1 if i == 0 else 0
    counts[0] += n_cone_zero
    B = np.array(b, dtype=np.int64).reshape(d, d)
    for u in projective_points(d, q):
        uu = np.array(u, dtype=np.int64)
        val = int(uu @ B @ uu) % q
        for lam in range(1, q):
            w = 1 if i == 0 else legendre(lam, q)
            counts[lam * val % q] += w
    return psi_sum(counts, q)


# -- verification records ------------------------------------------------------

@dataclass
class ParityReport:
    i: int
    d: int
    q: int
    passed: bool
    strata: dict[int, dict] = field(default_factory=dict)
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"i": self.i, "d": self.d, "q": self.q, "passed": self.passed,
               "strata": {str(j): v for j, v in sorted(self.strata.items())}}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def parity_support(i: int, d: int, q: int, limit: int | None = None) -> ParityReport:
    """Four_psi(l_i) vanishes at b exactly when corank(b) != i + d (mod 2)."""
    if i not in (0, 1):
        raise ValueError("i must be 0 or 1")
    cf = cone_functions(d, q, limit)
    F = four_psi(cf.l0 if i == 0 else cf.l1, limit=limit)
    report = ParityReport(i, d, q, True)
    for b, val in F.items():
        j = corank_q(b, q)
        expect_zero = (j - i - d) % 2 != 0
        row = report.strata.setdefault(j, {"forms": 0, "nonzero": 0, "expected_zero": expect_zero})
        row["forms"] += 1
        row["nonzero"] += int(not val.is_zero())
        if val.is_zero() != expect_zero and report.passed:
            report.passed = False
            report.counterexample = {"b": [list(r) for r in b], "corank": j, "value": val.to_json()}
    return report


@dataclass
class SquaredRecord:
    b: SymMatrix
    corank: int
    conjugate_product_ok: bool
    plain_square_ok: bool | None

    @property
    def passed(self) -> bool:
        return self.conjugate_product_ok and self.plain_square_ok is not False


def squared_identity(b, q: int | None = None) -> SquaredRecord:
    """s(b) s^{psi^-1}(b) = q^{d+j}; and s(b)^2 = q^{d+j} when -1 is a square."""
    if isinstance(b, SymForm):
        b, q = b.mat, b.q
    d = len(b)
    j = corank_q(b, q)
    target = q ** (d + j)
    s = s_psi(b, q)
    conj_ok = s * s_psi(b, q, inverse=True) == target
    plain = (s * s == target) if legendre(-1, q) == 1 else None
    return SquaredRecord(tuple(tuple(r) for r in b), j, conj_ok, plain)


def kernel_line_count(b: Sequence[Sequence[int]], q: int) -> int:
    """Number of lines V0 in ker b, by enumeration of projective points."""
    d = len(b)
    B = np.array(b, dtype=np.int64).reshape(d, d)
    return sum(1 for u in fl.projective_points(d, q) if not np.any(B @ np.array(u) % q))


def stratum_sizes(d: int, q: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for b in all_symmetric(d, q):
        j = corank_q(b, q)
        out[j] = out.get(j, 0) + 1
    return dict(sorted(out.items()))


def congruence_orbits(d: int, q: int, limit: int | None = None) -> list[set[SymMatrix]]:
    """Orbits of GL(V) acting on forms by b -> a^T b a."""
    gl = list(fl.general_linear(d, q, limit))
    remaining = set(all_symmetric(d, q))
    orbits = []
    while remaining:
        b = min(remaining)
        orb = {congruent(b, a, q) for a in gl}
        orbits.append(orb)
        remaining -= orb
    return orbits


def even_odd_parts(d: int, q: int, limit: int | None = None) -> tuple[StrataFn, StrataFn]:
    """(s_g, s_s) = q^{D/2} (Four l_{d mod 2}, Four l_{d+1 mod 2})."""
    cf = cone_functions(d, q, limit)
    D = sym_dim(d)
    up = sqrt_q_power(q, D)
    ls = (cf.l0, cf.l1)
    g = four_psi(ls[d % 2], limit=limit)
    s = four_psi(ls[(d + 1) % 2], limit=limit)
    scale = lambda F: StrataFn(d, q, FORMS, [v * up for v in F.values])
    return scale(g), scale(s)


def s_psi_table(d: int, q: int, limit: int | None = None) -> StrataFn:
    return _table(d, q, FORMS, lambda b: s_psi(b, q), limit)


def table(name: str, d: int, q: int, limit: int | None = None) -> StrataFn:
    """Named function tables: N, l0, l1 (tensors); s, four-l0, four-l1 (forms)."""
    if name == "s":
        return s_psi_table(d, q, limit)
    cf = cone_functions(d, q, limit)
    if name in ("N", "l0", "l1"):
        return {"N": cf.N, "l0": cf.l0, "l1": cf.l1}[name]
    if name == "four-l0":
        return four_psi(cf.l0, limit=limit)
    if name == "four-l1":
        return four_psi(cf.l1, limit=limit)
    raise ValueError(f"unknown strata table {name!r}")


STRATA_TABLES = ("N", "l0", "l1", "s", "four-l0", "four-l1")
