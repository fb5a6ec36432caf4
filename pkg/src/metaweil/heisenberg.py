"""Heisenberg group H(M), Schroedinger models S_{L,psi} and their intertwiners.

A model S_{L,psi} is realised on functions of the coset representatives
r in span(R), where R are the standard basis vectors at the non-pivot columns
of L's echelon basis.  A function on H(M) is recovered from its table by

    f(l + r, a) = psi(a - 1/2 <l, r>) f(r, 0),

and operators are dense q^d x q^d matrices with entries in Q(zeta_4p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from . import fqlinalg as fl
from .errors import NotScalar
from .scalars import CycloNum, FieldMismatch, basis, cyclo_order, sqrt_q_power
from .symplectic import GroupElem, Lagrangian, intersection_dim, pairing

_INT_BOUND = 2 ** 62


@dataclass(frozen=True)
class HElem:
    m: tuple[int, ...]
    a: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) % self.q for x in self.m))
        object.__setattr__(self, "a", int(self.a) % self.q)

    @classmethod
    def identity(cls, d: int, q: int) -> "HElem":
        return cls((0,) * (2 * d), 0, q)

    def act(self, g: GroupElem) -> "HElem":
        return HElem(g.apply(self.m), self.a, self.q)


def half(q: int) -> int:
    return pow(2, -1, q)


def h_mul(h1: HElem, h2: HElem) -> HElem:
    q = h1.q
    if len(h1.m) != len(h2.m) or h2.q != q:
        raise ValueError("elements of different Heisenberg groups")
    m = tuple((x + y) % q for x, y in zip(h1.m, h2.m))
    return HElem(m, h1.a + h2.a + half(q) * pairing(h1.m, h2.m, q), q)


def h_inv(h: HElem) -> HElem:
    return HElem(tuple(-x for x in h.m), -h.a, h.q)


def _pair_rows(u: np.ndarray, v: np.ndarray, q: int) -> np.ndarray:
    d = u.shape[-1] // 2
    return (np.sum(u[..., :d] * v[..., d:], axis=-1) - np.sum(u[..., d:] * v[..., :d], axis=-1)) % q


class Model:
    """Coordinates on S_{L,psi}."""

    def __init__(self, L: Lagrangian):
        self.L = L
        self.q = L.q
        self.d = L.d
        self.dim = self.q ** self.d
        self.N = cyclo_order(self.q)

    def __eq__(self, other):
        return isinstance(other, Model) and other.L == self.L

    def __hash__(self):
        return hash(("Model", self.L))

    def __repr__(self):
        return f"Model({self.L!r})"

    @cached_property
    def reps(self) -> np.ndarray:
        """The q^d representatives r, in index order."""
        d, q = self.d, self.q
        coords = np.array(list(fl.vectors(d, q)), dtype=np.int64).reshape(-1, d)
        out = np.zeros((self.dim, 2 * d), dtype=np.int64)
        out[:, list(self.L.free_columns)] = coords
        return out

    @cached_property
    def _basis(self) -> np.ndarray:
        return np.array(self.L.basis, dtype=np.int64)

    def decompose(self, m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """m = l + r with l in L, r in span(R); returns (l, r, index of r)."""
        m = np.asarray(m, dtype=np.int64) % self.q
        l = m[..., list(self.L.pivots)] @ self._basis % self.q
        r = (m - l) % self.q
        idx = np.zeros(m.shape[:-1], dtype=np.int64)
        for c in self.L.free_columns:
            idx = idx * self.q + r[..., c]
        return l, r, idx

    def locate(self, m: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """For h = (m, a): the index of r and the phase a - 1/2<l, r> (mod q)."""
        l, r, idx = self.decompose(m)
        phase = (np.asarray(a, dtype=np.int64) - half(self.q) * _pair_rows(l, r, self.q)) % self.q
        return idx, phase

    def index_of(self, r: Sequence[int]) -> int:
        return int(self.decompose(np.array(r))[2])


@lru_cache(maxsize=None)
def model(L: Lagrangian) -> Model:
    return Model(L)


def _normalize(arr: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    if arr.dtype == object:
        g = math.gcd(den, *(int(x) for x in arr.flat))
    else:
        g = math.gcd(den, int(np.gcd.reduce(arr.ravel()))) if arr.size else abs(den)
    if den < 0:
        g = -g
    if g != 1:
        arr = arr // g
        den //= g
    if arr.dtype == object and _fits(arr):
        arr = arr.astype(np.int64)
    return arr, den


def _fits(arr: np.ndarray) -> bool:
    if arr.size == 0:
        return True
    return max(abs(int(arr.max())), abs(int(arr.min()))) < _INT_BOUND


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return max(abs(int(arr.max())), abs(int(arr.min())))


@lru_cache(maxsize=None)
def _mul_table(N: int) -> np.ndarray:
    B = basis(N)
    deg = B.deg
    R3 = np.zeros((deg, deg, deg), dtype=np.int64)
    for a in range(deg):
        for b in range(deg):
            R3[a, b] = B.red_array[a + b]
    return R3


def _cyclo_matmul(A: np.ndarray, B: np.ndarray, N: int) -> np.ndarray:
    R3 = _mul_table(N)
    n = A.shape[1]
    deg = R3.shape[0]
    bound = _maxabs(A) * _maxabs(B) * n * deg * deg * max(1, _maxabs(R3))
    if bound >= _INT_BOUND or A.dtype == object or B.dtype == object:
        A, B, R3 = A.astype(object), B.astype(object), R3.astype(object)
    T = np.einsum("ija,jkb->ikab", A, B)
    return np.tensordot(T, R3, axes=([2, 3], [0, 1]))


class ModelOp:
    """A linear map S_{source} -> S_{target}; entries[i, j] maps source j to target i."""

    __slots__ = ("source", "target", "arr", "den", "N")

    def __init__(self, source: Model, target: Model, arr: np.ndarray, den: int = 1):
        self.source = source
        self.target = target
        self.N = source.N
        self.arr, self.den = _normalize(arr, den)

    @classmethod
    def from_terms(cls, source: Model, target: Model, tgt, src, phase) -> "ModelOp":
        """sum of psi(phase) at (tgt, src) over the given index arrays."""
        N = source.N
        B = basis(N)
        arr = np.zeros((target.dim, source.dim, B.deg), dtype=np.int64)
        np.add.at(arr, (np.ravel(tgt), np.ravel(src)), B.pow_array[(4 * np.ravel(phase)) % N])
        return cls(source, target, arr)

    @classmethod
    def identity(cls, m: Model) -> "ModelOp":
        B = basis(m.N)
        arr = np.zeros((m.dim, m.dim, B.deg), dtype=np.int64)
        arr[np.arange(m.dim), np.arange(m.dim), 0] = 1
        return cls(m, m, arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.arr.shape[0], self.arr.shape[1]

    def entry(self, i: int, j: int) -> CycloNum:
        return CycloNum(self.N, [int(x) for x in self.arr[i, j]], self.den)

    def entries(self) -> list[list[CycloNum]]:
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def __matmul__(self, other: "ModelOp") -> "ModelOp":
        if other.target != self.source:
            raise ValueError(f"cannot compose: {other.target} feeds {self.source}")
        arr = _cyclo_matmul(self.arr, other.arr, self.N)
        return ModelOp(other.source, self.target, arr, self.den * other.den)

    def scale(self, c) -> "ModelOp":
        if not isinstance(c, CycloNum):
            c = CycloNum.from_rational(self.N, c)
        if c.N != self.N:
            raise FieldMismatch("scalar from a different cyclotomic field")
        R3 = _mul_table(self.N)
        cv = np.array(c.num, dtype=np.int64)
        if _maxabs(self.arr) * _maxabs(cv) * len(cv) ** 2 * _maxabs(R3) >= _INT_BOUND:
            arr = np.einsum("ija,b,abc->ijc", self.arr.astype(object), cv.astype(object), R3.astype(object))
        else:
            arr = np.einsum("ija,b,abc->ijc", self.arr, cv, R3)
        return ModelOp(self.source, self.target, arr, self.den * c.den)

    def __add__(self, other: "ModelOp") -> "ModelOp":
        if (other.source, other.target) != (self.source, self.target):
            raise ValueError("operators act between different models")
        arr = self.arr.astype(object) * other.den + other.arr.astype(object) * self.den
        return ModelOp(self.source, self.target, arr, self.den * other.den)

    def __neg__(self):
        return ModelOp(self.source, self.target, -self.arr, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ModelOp):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.den == other.den and np.array_equal(self.arr, other.arr))

    def __hash__(self):
        return hash((self.source, self.target, self.den, self.arr.tobytes()))

    def is_zero(self) -> bool:
        return not np.any(self.arr)

    def apply(self, f: "ModelVec") -> "ModelVec":
        if f.model != self.source:
            raise ValueError("vector lives in a different model")
        vals = []
        for i in range(self.shape[0]):
            acc = CycloNum.zero(self.N)
            for j, fj in enumerate(f.values):
                if fj:
                    acc = acc + self.entry(i, j) * fj
            vals.append(acc)
        return ModelVec(self.target, tuple(vals))

    def to_json(self) -> dict:
        return {
            "source": self.source.L.to_json(),
            "target": self.target.L.to_json(),
            "entries": [[e.to_json() for e in row] for row in self.entries()],
        }

    def __repr__(self):
        return f"ModelOp({self.source.L.basis} -> {self.target.L.basis}, dim={self.shape})"


@dataclass(frozen=True)
class ModelVec:
    model: Model
    values: tuple[CycloNum, ...]

    @classmethod
    def delta(cls, m: Model, r: Sequence[int] | None = None) -> "ModelVec":
        idx = 0 if r is None else m.index_of(r)
        vals = [CycloNum.zero(m.N)] * m.dim
        vals[idx] = CycloNum.one(m.N)
        return cls(m, tuple(vals))


def v_standard(L: Lagrangian) -> ModelVec:
    """v_{L,st}: supported on L + k, value 1 at the identity."""
    return ModelVec.delta(model(L))


def f_standard(f: ModelVec) -> CycloNum:
    """f_{L,st}: evaluation at the identity of H(M)."""
    return f.values[0]


def model_eval(f: ModelVec, h: HElem) -> CycloNum:
    m = f.model
    idx, phase = m.locate(np.array(h.m), np.array(h.a))
    from .scalars import psi
    return psi(int(phase), m.q) * f.values[int(idx)]


def rho(m: Model, h0: HElem) -> ModelOp:
    """Right translation (rho(h0) f)(h) = f(h h0)."""
    q = m.q
    reps = m.reps
    m0 = np.array(h0.m, dtype=np.int64)
    pts = (reps + m0) % q
    a = (h0.a + half(q) * _pair_rows(reps, np.broadcast_to(m0, reps.shape), q)) % q
    idx, phase = m.locate(pts, a)
    return ModelOp.from_terms(m, m, np.arange(m.dim), idx, phase)


@lru_cache(maxsize=None)
def intertwiner(L1: Lagrangian, L2: Lagrangian) -> ModelOp:
    """F_{L1,L2}: (F f)(h) = sum_{z in L2} f((z, 0) h), a map S_{L1} -> S_{L2}."""
    src, tgt = model(L1), model(L2)
    q = L1.q
    z = L2.point_array  # (Z, 2d)
    r2 = tgt.reps  # (R, 2d)
    pts = (z[None, :, :] + r2[:, None, :]) % q
    a = half(q) * _pair_rows(np.broadcast_to(z[None], pts.shape), np.broadcast_to(r2[:, None], pts.shape), q) % q
    idx, phase = src.locate(pts, a)
    tgt_idx = np.broadcast_to(np.arange(tgt.dim)[:, None], idx.shape)
    return ModelOp.from_terms(src, tgt, tgt_idx, idx, phase)


@lru_cache(maxsize=None)
def normalized_intertwiner(L1: Lagrangian, L2: Lagrangian) -> ModelOp:
    """q^{-(d + dim L1 cap L2)/2} F_{L1,L2} with the fixed square root of q."""
    k = L1.d + intersection_dim(L1, L2)
    return intertwiner(L1, L2).scale(sqrt_q_power(L1.q, -k))


def scalar_of(op: ModelOp) -> CycloNum:
    if op.source != op.target:
        raise NotScalar("operator is not an endomorphism")
    n = op.shape[0]
    diag = op.arr[np.arange(n), np.arange(n)]
    off = op.arr.copy()
    off[np.arange(n), np.arange(n)] = 0
    if np.any(off) or np.any(diag != diag[0]):
        raise NotScalar("operator is not a multiple of the identity")
    return CycloNum(op.N, [int(x) for x in diag[0]], op.den)


def heisenberg_elements(d: int, q: int):
    for m in fl.vectors(2 * d, q):
        for a in range(q):
            yield HElem(m, a, q)


def equivariant_span_rank(L: Lagrangian, prime: int | None = None) -> int:
    """Rank of the span of {rho(h)} inside End(S_{L,psi}).

    The operators have entries in Z[zeta_N].  They are mapped to F_ell through
    a ring homomorphism zeta_N -> w (w of exact order N, ell = 1 mod N); the
    rank there is a lower bound for the rank over Q(zeta_N), and q^{2d} is an
    upper bound, so a full rank mod ell is an exact certificate.
    """
    m = model(L)
    N = m.N
    ell = prime or _split_prime(N)
    w = _root_of_order(N, ell)
    # value of each basis monomial x^j under zeta -> w
    deg = basis(N).deg
    wpow = np.array([pow(w, j, ell) for j in range(deg)], dtype=np.int64)
    rows = []
    for h in heisenberg_elements(m.d, m.q):
        op = rho(m, h)
        vals = (op.arr.astype(object) @ wpow.astype(object)) % ell
        rows.append([int(x) for x in vals.ravel()])
    return fl.rank(rows, ell)


def _split_prime(N: int) -> int:
    ell = N + 1
    while not (_is_prime(ell) and ell % N == 1):
        ell += N
    return ell


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, math.isqrt(n) + 1))


def _root_of_order(N: int, ell: int) -> int:
    for g in range(2, ell):
        w = pow(g, (ell - 1) // N, ell)
        if all(pow(w, N // p, ell) != 1 for p in _factor(N)):
            return w
    raise ValueError("no root of unity of the requested order")


def _factor(n: int) -> list[int]:
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
