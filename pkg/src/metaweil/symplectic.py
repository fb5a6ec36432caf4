"""Symplectic linear algebra over F_q.

Points of M = F_q^{2d} are column vectors with coordinates (e_1..e_d, f_1..f_d)
and the form <u, v> = u^T J v with J = [[0, I], [-I, 0]], so <e_i, f_j> = delta_ij.
Group elements act on the left; a subspace is mapped by applying g to each
basis row (viewed as a column) and re-echelonising.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import fqlinalg as fl
from .errors import LimitExceeded, TransversalityError, enumeration_limit, guard
from .scalars import check_modulus


def pairing(u: Sequence[int], v: Sequence[int], q: int) -> int:
    d = len(u) // 2
    return (sum(u[i] * v[d + i] - u[d + i] * v[i] for i in range(d))) % q


@dataclass(frozen=True)
class SympSpace:
    d: int
    q: int

    def __post_init__(self):
        check_modulus(self.q)
        if self.d < 1:
            raise ValueError("d must be positive")

    @cached_property
    def J(self) -> tuple[tuple[int, ...], ...]:
        d = self.d
        rows = []
        for i in range(2 * d):
            row = [0] * (2 * d)
            if i < d:
                row[d + i] = 1
            else:
                row[i - d] = -1 % self.q
            rows.append(tuple(row))
        return tuple(rows)

    def pair(self, u, v) -> int:
        return pairing(u, v, self.q)

    def points(self) -> np.ndarray:
        return np.array(list(fl.vectors(2 * self.d, self.q)), dtype=np.int64)


def _as_tuple(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in rows)


@dataclass(frozen=True, order=True)
class GroupElem:
    mat: tuple[tuple[int, ...], ...]
    q: int

    @classmethod
    def of(cls, rows, q: int) -> "GroupElem":
        return cls(_as_tuple(fl.mat(rows, q)), q)

    @classmethod
    def identity(cls, d: int, q: int) -> "GroupElem":
        return cls(_as_tuple(fl.identity(2 * d)), q)

    @property
    def d(self) -> int:
        return len(self.mat) // 2

    def __matmul__(self, other: "GroupElem") -> "GroupElem":
        return GroupElem(_as_tuple(fl.matmul(self.mat, other.mat, self.q)), self.q)

    def inverse(self) -> "GroupElem":
        # g^-1 = -J g^T J for symplectic g
        J = SympSpace(self.d, self.q).J
        m = fl.matmul(fl.matmul(J, fl.transpose(self.mat), self.q), J, self.q)
        return GroupElem(_as_tuple([[(-x) % self.q for x in row] for row in m]), self.q)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(fl.matvec(self.mat, v, self.q))

    def blocks(self):
        d = self.d
        m = self.mat
        a = [list(r[:d]) for r in m[:d]]
        b = [list(r[d:]) for r in m[:d]]
        c = [list(r[:d]) for r in m[d:]]
        dd = [list(r[d:]) for r in m[d:]]
        return a, b, c, dd

    def to_json(self) -> dict:
        return {"q": self.q, "mat": [list(r) for r in self.mat]}


def is_symplectic(g, q: int | None = None) -> bool:
    if isinstance(g, GroupElem):
        q, rows = g.q, g.mat
    else:
        rows = g
    n = len(rows)
    if n == 0 or n % 2 or any(len(r) != n for r in rows):
        raise ValueError("expected a square matrix of even size")
    J = SympSpace(n // 2, q).J
    lhs = fl.matmul(fl.matmul(fl.transpose(rows), J, q), rows, q)
    return lhs == [list(r) for r in J]


@dataclass(frozen=True, order=True)
class Lagrangian:
    """A Lagrangian subspace, stored by its reduced row-echelon basis."""

    basis: tuple[tuple[int, ...], ...]
    q: int

    @classmethod
    def span(cls, rows, q: int, check: bool = True) -> "Lagrangian":
        red, piv = fl.rref(rows, q)
        L = cls(_as_tuple(red), q)
        if check:
            d2 = len(red[0]) if red else 0
            if len(red) * 2 != d2:
                raise ValueError(f"rank {len(red)} is not half of {d2}")
            if any(pairing(u, v, q) for u in red for v in red):
                raise ValueError("subspace is not isotropic")
        return L

    @property
    def d(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @cached_property
    def free_columns(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(j for j in range(2 * self.d) if j not in piv)

    @cached_property
    def point_array(self) -> np.ndarray:
        coeffs = np.array(list(fl.vectors(self.d, self.q)), dtype=np.int64).reshape(-1, self.d)
        return coeffs @ np.array(self.basis, dtype=np.int64) % self.q

    def contains(self, v: Sequence[int]) -> bool:
        return fl.rank(list(self.basis) + [list(v)], self.q) == self.d

    def act(self, g: GroupElem) -> "Lagrangian":
        rows = [g.apply(row) for row in self.basis]
        return Lagrangian.span(rows, self.q, check=False)

    def to_json(self) -> dict:
        return {"q": self.q, "basis": [list(r) for r in self.basis]}

    def __repr__(self):
        return f"Lagrangian({[list(r) for r in self.basis]}, q={self.q})"


def standard_lagrangian(d: int, q: int) -> Lagrangian:
    """V = span(e_1..e_d)."""
    return Lagrangian.span(fl.identity(2 * d)[:d], q)


def dual_lagrangian(d: int, q: int) -> Lagrangian:
    """V* = span(f_1..f_d)."""
    return Lagrangian.span(fl.identity(2 * d)[d:], q)


def lagrangian_count(d: int, q: int) -> int:
    n = 1
    for i in range(1, d + 1):
        n *= q ** i + 1
    return n


def _rref_matrices(d: int, n: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    for piv in itertools.combinations(range(n), d):
        free_slots = [(r, c) for r in range(d) for c in range(piv[r] + 1, n) if c not in piv]
        for vals in itertools.product(range(q), repeat=len(free_slots)):
            m = [[0] * n for _ in range(d)]
            for r, c in enumerate(piv):
                m[r][c] = 1
            for (r, c), x in zip(free_slots, vals):
                m[r][c] = x
            yield _as_tuple(m)


@lru_cache(maxsize=None)
def _enumerate_lagrangians(d: int, q: int) -> tuple[Lagrangian, ...]:
    out = []
    for m in _rref_matrices(d, 2 * d, q):
        if not any(pairing(u, v, q) for u in m for v in m):
            out.append(Lagrangian(m, q))
    out.sort()
    return tuple(out)


def enumerate_lagrangians(space: SympSpace, limit: int | None = None) -> tuple[Lagrangian, ...]:
    guard(lagrangian_count(space.d, space.q), limit, "Lagrangian enumeration")
    return _enumerate_lagrangians(space.d, space.q)


def intersection_dim(L1: Lagrangian, L2: Lagrangian) -> int:
    return 2 * L1.d - fl.rank(list(L1.basis) + list(L2.basis), L1.q)


def transverse(L1: Lagrangian, L2: Lagrangian) -> bool:
    return intersection_dim(L1, L2) == 0


@dataclass(frozen=True)
class BCoord:
    """Symmetric matrix b with L1 = {b(u) + u : u in L2}, in a basis of V.

    The basis of V is its echelon basis v_i; L2 carries the dual basis u_j
    with <v_i, u_j> = delta_ij, and b(u_j) = sum_i b[i][j] v_i.
    """

    b: tuple[tuple[int, ...], ...]
    L1: Lagrangian
    L2: Lagrangian
    V: Lagrangian
    dual_basis: tuple[tuple[int, ...], ...] = field(compare=False)

    @property
    def q(self) -> int:
        return self.V.q

    def rank(self) -> int:
        return fl.rank(self.b, self.q)

    def graph(self) -> Lagrangian:
        q, d = self.q, self.V.d
        rows = []
        for j, u in enumerate(self.dual_basis):
            bu = [sum(self.b[i][j] * self.V.basis[i][k] for i in range(d)) for k in range(2 * d)]
            rows.append([(x + y) % q for x, y in zip(bu, u)])
        return Lagrangian.span(rows, q, check=False)


def b_coordinates(L1: Lagrangian, L2: Lagrangian, V: Lagrangian) -> BCoord:
    q, d = V.q, V.d
    if not transverse(V, L1) or not transverse(V, L2):
        raise TransversalityError("V must be transverse to both L1 and L2")
    gram = [[pairing(v, w, q) for w in L2.basis] for v in V.basis]
    ginv = fl.inverse(gram, q)
    # u_j = sum_k w_k ginv[k][j]
    dual = [[sum(L2.basis[k][c] * ginv[k][j] for k in range(d)) % q for c in range(2 * d)]
            for j in range(d)]
    # Solve x = sum_i beta_i v_i + sum_j alpha_j u_j for each row x of L1.
    frame = fl.transpose(list(V.basis) + dual)
    alphas, betas = [], []
    for x in L1.basis:
        sol = fl.solve(frame, list(x), q)
        assert sol is not None
        betas.append(sol[:d])
        alphas.append(sol[d:])
    # rows of L1: x_k = b(A_k) + A_k with A = alphas; b(u) in coordinates: B A_k^T = beta_k^T
    ainv = fl.inverse(alphas, q)  # invertible since L1 is a graph over L2
    # B = beta^T (alpha^T)^-1
    B = fl.matmul(fl.transpose(betas), fl.transpose(ainv), q)
    bc = BCoord(_as_tuple(B), L1, L2, V, _as_tuple(dual))
    if fl.transpose(B) != B:
        raise AssertionError("b-coordinates not symmetric; L1 is not Lagrangian")
    return bc


# -- groups ----------------------------------------------------------------

def _symmetric_unit(d: int, i: int, j: int) -> list[list[int]]:
    s = fl.zeros(d, d)
    s[i][j] = 1
    s[j][i] = 1
    return s


def block(a, b, c, dd, q: int) -> GroupElem:
    rows = [list(ra) + list(rb) for ra, rb in zip(a, b)] + [list(rc) + list(rd) for rc, rd in zip(c, dd)]
    return GroupElem.of(rows, q)


def levi(a, q: int) -> GroupElem:
    d = len(a)
    return block(a, fl.zeros(d, d), fl.zeros(d, d), fl.transpose(fl.inverse(a, q)), q)


def unipotent(s, q: int) -> GroupElem:
    d = len(s)
    return block(fl.identity(d), s, fl.zeros(d, d), fl.identity(d), q)


def weyl_element(d: int, q: int, b=None) -> GroupElem:
    """(0 b; -b^{-T} 0); b defaults to the identity."""
    if b is None:
        b = fl.identity(d)
    c = [[(-x) % q for x in row] for row in fl.transpose(fl.inverse(b, q))]
    return block(fl.zeros(d, d), b, c, fl.zeros(d, d), q)


def primitive_root(q: int) -> int:
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in _prime_factors(q - 1)):
            return g
    return 1


def _prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def generators(d: int, q: int) -> list[GroupElem]:
    """A generating set of Sp(2d, F_q): Levi generators, unipotents, Weyl element."""
    gens = []
    diag = fl.identity(d)
    diag[0][0] = primitive_root(q)
    gens.append(levi(diag, q))
    for i in range(d):
        for j in range(d):
            if i != j:
                e = fl.identity(d)
                e[i][j] = 1
                gens.append(levi(e, q))
    for i in range(d):
        for j in range(i, d):
            gens.append(unipotent(_symmetric_unit(d, i, j), q))
    gens.append(weyl_element(d, q))
    return gens


def symplectic_group_order(d: int, q: int) -> int:
    n = q ** (d * d)
    for i in range(1, d + 1):
        n *= q ** (2 * i) - 1
    return n


@lru_cache(maxsize=None)
def _symplectic_group(d: int, q: int) -> tuple[GroupElem, ...]:
    if d == 1:
        out = [GroupElem.of([[a, b], [c, e]], q)
               for a, b, c, e in itertools.product(range(q), repeat=4) if (a * e - b * c) % q == 1]
        return tuple(sorted(out))
    gens = generators(d, q)
    seen = {GroupElem.identity(d, q)}
    frontier = deque(seen)
    while frontier:
        g = frontier.popleft()
        for s in gens:
            h = g @ s
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return tuple(sorted(seen))


def symplectic_group(d: int, q: int, limit: int | None = None) -> tuple[GroupElem, ...]:
    guard(symplectic_group_order(d, q), limit, f"Sp({2 * d}, F_{q}) enumeration")
    return _symplectic_group(d, q)


def symmetric_matrices(d: int, q: int) -> Iterator[list[list[int]]]:
    """All symmetric d x d matrices, lexicographic in the upper-triangular entries."""
    slots = [(i, j) for i in range(d) for j in range(i, d)]
    for vals in itertools.product(range(q), repeat=len(slots)):
        m = fl.zeros(d, d)
        for (i, j), x in zip(slots, vals):
            m[i][j] = x
            m[j][i] = x
        yield m


def siegel_parabolic(d: int, q: int, limit: int | None = None) -> tuple[GroupElem, ...]:
    """The stabiliser of V = span(e_i): all (a, a s; 0, a^{-T}) with s symmetric."""
    gl = list(fl.general_linear(d, q))
    guard(len(gl) * q ** (d * (d + 1) // 2), limit, "Siegel parabolic enumeration")
    out = []
    for a in gl:
        ait = fl.transpose(fl.inverse(a, q))
        for s in symmetric_matrices(d, q):
            out.append(block(a, fl.matmul(a, s, q), fl.zeros(d, d), ait, q))
    return tuple(sorted(out))


def stabilizer_of(L: Lagrangian, group: Iterable[GroupElem]) -> list[GroupElem]:
    return [g for g in group if L.act(g) == L]


@dataclass
class PairPartition:
    classes: dict[int, list[tuple[Lagrangian, Lagrangian]]]
    single_orbit: dict[int, bool]


def orbit_invariant_pairs(space: SympSpace, limit: int | None = None) -> PairPartition:
    lags = enumerate_lagrangians(space, limit)
    guard(len(lags) ** 2, limit, "Lagrangian pair enumeration")
    classes: dict[int, list] = {}
    for L1 in lags:
        for L2 in lags:
            classes.setdefault(intersection_dim(L1, L2), []).append((L1, L2))
    gens = generators(space.d, space.q)
    single = {}
    for i, pairs in sorted(classes.items()):
        start = pairs[0]
        orbit = {start}
        frontier = deque([start])
        while frontier:
            a, b = frontier.popleft()
            for g in gens:
                nxt = (a.act(g), b.act(g))
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        single[i] = orbit == set(pairs)
    return PairPartition(dict(sorted(classes.items())), single)


def common_transversals(L1: Lagrangian, L2: Lagrangian, lags: Sequence[Lagrangian]) -> list[Lagrangian]:
    return [V for V in lags if transverse(V, L1) and transverse(V, L2)]


def limit_ok(count: int, limit: int | None = None) -> bool:
    try:
        guard(count, limit, "")
    except LimitExceeded:
        return False
    return True


__all__ = [
    "SympSpace", "GroupElem", "Lagrangian", "BCoord", "PairPartition",
    "is_symplectic", "enumerate_lagrangians", "intersection_dim", "transverse",
    "b_coordinates", "orbit_invariant_pairs", "symplectic_group", "siegel_parabolic",
    "generators", "standard_lagrangian", "dual_lagrangian", "weyl_element", "levi",
    "unipotent", "block", "lagrangian_count", "symmetric_matrices", "pairing",
    "common_transversals", "stabilizer_of", "enumeration_limit",
]
