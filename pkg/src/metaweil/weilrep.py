"""Metaplectic operators M[g] on a Schroedinger model, the explicit
Schroedinger formulas on the Siegel parabolic and the Weyl element, the
operator cocycle and the finite theta function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import fqlinalg as fl
from .errors import NotScalar
from .heisenberg import (
    HElem, Model, ModelOp, ModelVec, _pair_rows, f_standard, half, heisenberg_elements,
    model, normalized_intertwiner, rho, scalar_of, v_standard,
)
from .scalars import CycloNum, basis, sqrt_q_power
from .symplectic import GroupElem, Lagrangian, is_symplectic, standard_lagrangian


@lru_cache(maxsize=None)
def translate_op(g: GroupElem, L: Lagrangian) -> ModelOp:
    """A_g : S_{L} -> S_{gL}, (A_g f)(h) = f(g^{-1} h)."""
    src, tgt = model(L), model(L.act(g))
    ginv = np.array(g.inverse().mat, dtype=np.int64)
    pts = tgt.reps @ ginv.T % L.q
    idx, phase = src.locate(pts, np.zeros(len(pts), dtype=np.int64))
    return ModelOp.from_terms(src, tgt, np.arange(tgt.dim), idx, phase)


@dataclass(frozen=True)
class WeilOp:
    g: GroupElem
    L: Lagrangian
    op: ModelOp

    def intertwines(self, h: HElem) -> bool:
        m = self.op.source
        return rho(m, h.act(self.g)) @ self.op == self.op @ rho(m, h)

    def inverse_op(self) -> ModelOp:
        return weil_inverse(self.g, self.L)


@lru_cache(maxsize=None)
def weil_operator(g: GroupElem, L: Lagrangian) -> WeilOp:
    """M[g] = F_{gL,L} o A_g, normalised intertwiner after the geometric substitution."""
    if not is_symplectic(g):
        raise ValueError("g is not symplectic")
    op = normalized_intertwiner(L.act(g), L) @ translate_op(g, L)
    return WeilOp(g, L, op)


@lru_cache(maxsize=None)
def weil_inverse(g: GroupElem, L: Lagrangian) -> ModelOp:
    """M[g]^{-1} = A_{g^{-1}} o F_{L,gL}."""
    gL = L.act(g)
    return translate_op(g.inverse(), gL) @ normalized_intertwiner(L, gL)


def _split_upper(g: GroupElem):
    a, b, c, dd = g.blocks()
    q = g.q
    if any(x % q for row in c for x in row):
        raise ValueError("lower-left block must vanish")
    if not is_symplectic(g):
        raise ValueError("not symplectic: a^{-1} b must be symmetric and d = a^{-T}")
    return a, b


def schrodinger_upper(g: GroupElem) -> ModelOp:
    """(M[g] f)(v*) = psi(1/2 <a^T v*, b^T v*>) f(a^T v*) on S_{V,psi}, V = span(e_i)."""
    a, b = _split_upper(g)
    q, d = g.q, g.d
    m = model(standard_lagrangian(d, q))
    xi = m.reps[:, d:]  # v* coordinates of the representatives
    at = np.array(fl.transpose(a), dtype=np.int64)
    bt = np.array(fl.transpose(b), dtype=np.int64)
    axi = xi @ at.T % q
    bxi = xi @ bt.T % q
    phase = half(q) * np.sum(axi * bxi, axis=1) % q
    src_pts = np.zeros_like(m.reps)
    src_pts[:, d:] = axi
    idx = m.decompose(src_pts)[2]
    return ModelOp.from_terms(m, m, np.arange(m.dim), idx, phase)


def schrodinger_weyl(g: GroupElem) -> ModelOp:
    """(M[g] f)(v*) = q^{-d/2} sum_{v in V} psi(<v, v*>) f(b^{-1} v) for g = (0 b; -b^{-T} 0)."""
    a, b, c, dd = g.blocks()
    q, d = g.q, g.d
    if any(x % q for row in a + dd for x in row):
        raise ValueError("expected an antidiagonal element")
    if not is_symplectic(g):
        raise ValueError("not symplectic")
    m = model(standard_lagrangian(d, q))
    binv = np.array(fl.inverse(b, q), dtype=np.int64)
    xi = m.reps[:, d:]
    vs = np.array(list(fl.vectors(d, q)), dtype=np.int64).reshape(-1, d)
    tgt = np.repeat(np.arange(m.dim), len(vs))
    v_rep = np.tile(vs, (m.dim, 1))
    xi_rep = np.repeat(xi, len(vs), axis=0)
    phase = np.sum(v_rep * xi_rep, axis=1) % q
    src_pts = np.zeros((len(v_rep), 2 * d), dtype=np.int64)
    src_pts[:, d:] = v_rep @ binv.T % q
    idx = m.decompose(src_pts)[2]
    op = ModelOp.from_terms(m, m, tgt, idx, phase)
    return op.scale(sqrt_q_power(q, -d))


def operator_cocycle(g1: GroupElem, g2: GroupElem, L: Lagrangian) -> CycloNum:
    """c with M[g1] M[g2] = c M[g1 g2]."""
    prod = weil_operator(g1, L).op @ weil_operator(g2, L).op @ weil_inverse(g1 @ g2, L)
    return scalar_of(prod)


def operator_cocycle_table(group: Sequence[GroupElem], L: Lagrangian) -> dict:
    return {(g1, g2): operator_cocycle(g1, g2, L) for g1 in group for g2 in group}


def theta_fn(g: GroupElem, L: Lagrangian) -> CycloNum:
    """f_{L,st}(M[g] v_{L,st}): the (0, 0) entry of M[g]."""
    return weil_operator(g, L).op.entry(0, 0)


def theta_of_op(op: ModelOp) -> CycloNum:
    return f_standard(op.apply(v_standard(op.source.L)))


def check_intertwining(w: WeilOp, elements: Iterable[HElem]) -> HElem | None:
    """First h violating rho(g m, a) M = M rho(m, a), or None."""
    for h in elements:
        if not w.intertwines(h):
            return h
    return None


# -- cocycle algebra --------------------------------------------------------

def check_cocycle_identity(table: dict, group: Sequence[GroupElem]):
    """First (g1, g2, g3) with c(g1,g2) c(g1g2,g3) != c(g2,g3) c(g1,g2g3), or None."""
    for g1, g2, g3 in itertools.product(group, repeat=3):
        lhs = table[g1, g2] * table[g1 @ g2, g3]
        rhs = table[g2, g3] * table[g1, g2 @ g3]
        if lhs != rhs:
            return g1, g2, g3
    return None


def _exponent_table(table: dict, N: int) -> dict:
    lookup = {CycloNum.zeta(N, k): k for k in range(N)}
    out = {}
    for key, val in table.items():
        if val not in lookup:
            raise ValueError(f"cocycle value {val} is not an {N}-th root of unity")
        out[key] = lookup[val]
    return out


def find_splitting(table: dict, group: Sequence[GroupElem], gens: Sequence[GroupElem]) -> dict | None:
    """A function s: G -> mu_N with c(g1, g2) = s(g1) s(g2) / s(g1 g2), or None.

    Values on the generators are searched exhaustively in mu_N; s is then
    propagated along s(g x) = s(g) s(x) / c(g, x) and checked on every pair.
    """
    group = list(group)
    N = next(iter(table.values())).N
    ex = _exponent_table(table, N)
    ident = GroupElem.identity(group[0].d, group[0].q)
    for choice in itertools.product(range(N), repeat=len(gens)):
        s = {ident: (-ex[ident, ident]) % N}
        frontier = [ident]
        ok = True
        while frontier and ok:
            nxt = []
            for g in frontier:
                for x, sx in zip(gens, choice):
                    gx = g @ x
                    val = (s[g] + sx - ex[g, x]) % N
                    if gx in s:
                        if s[gx] != val:
                            ok = False
                            break
                    else:
                        s[gx] = val
                        nxt.append(gx)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(s) != len(group):
            continue
        if all((s[a] + s[b] - s[a @ b]) % N == ex[a, b] for a in group for b in group):
            return {g: CycloNum.zeta(N, s[g]) for g in group}
    return None


def verify_splitting(table: dict, s: dict, group: Sequence[GroupElem]):
    for a in group:
        for b in group:
            if table[a, b] * s[a @ b] != s[a] * s[b]:
                return a, b
    return None


def is_multiplicative(fn: dict, group: Sequence[GroupElem]):
    for a in group:
        for b in group:
            if fn[a @ b] != fn[a] * fn[b]:
                return a, b
    return None


# -- monomial fast path for exhaustive homomorphism checks -------------------

def monomial_form(op: ModelOp) -> tuple[np.ndarray, np.ndarray]:
    """(perm, phase) with op[perm[j], j] = zeta_p^phase[j] and zero elsewhere.

    Raises NotScalar-free ValueError when op is not monomial with p-th root entries.
    """
    N = op.N
    q = N // 4
    pw = basis(N).pow_array
    lookup = {tuple(pw[4 * k % N]): k for k in range(q)}
    n = op.shape[1]
    perm = np.zeros(n, dtype=np.int64)
    phase = np.zeros(n, dtype=np.int64)
    if op.den != 1:
        raise ValueError("not a monomial operator with root-of-unity entries")
    for j in range(n):
        nz = [i for i in range(op.shape[0]) if np.any(op.arr[i, j])]
        if len(nz) != 1 or tuple(op.arr[nz[0], j]) not in lookup:
            raise ValueError("not a monomial operator with root-of-unity entries")
        perm[j] = nz[0]
        phase[j] = lookup[tuple(op.arr[nz[0], j])]
    return perm, phase


def parabolic_homomorphism_counterexample(group: Sequence[GroupElem]):
    """Exhaustive check schrodinger_upper(g h) == schrodinger_upper(g) schrodinger_upper(h).

    Operators are compared in monomial form (a permutation with p-th root
    phases), which determines them exactly; all pairs are covered.
    """
    group = list(group)
    q = group[0].q
    forms = [monomial_form(schrodinger_upper(g)) for g in group]
    perms = np.stack([f[0] for f in forms])
    phases = np.stack([f[1] for f in forms])
    index = {g: k for k, g in enumerate(group)}
    mats = np.array([g.mat for g in group], dtype=np.int64)
    for i, g in enumerate(group):
        prod = np.einsum("ab,kbc->kac", mats[i], mats) % q
        prod_idx = np.array([index[GroupElem(tuple(map(tuple, p.tolist())), q)] for p in prod])
        # (A B)[perm_A[perm_B[j]], j] = phase_B[j] + phase_A[perm_B[j]]
        comp_perm = perms[i][perms]
        comp_phase = (phases + phases[i][perms]) % q
        bad = np.nonzero(np.any(comp_perm != perms[prod_idx], axis=1)
                         | np.any(comp_phase != phases[prod_idx], axis=1))[0]
        if len(bad):
            return g, group[int(bad[0])]
    return None


def proportionality(a: ModelOp, b: ModelOp) -> CycloNum:
    """c with a = c b, for invertible b given through its inverse-free ratio a b^{-1}."""
    return scalar_of(a @ b)


def random_heisenberg(d: int, q: int, count: int, rng) -> list[HElem]:
    out = []
    for _ in range(count):
        out.append(HElem(tuple(int(x) for x in rng.integers(0, q, 2 * d)), int(rng.integers(0, q)), q))
    return out


__all__ = [
    "translate_op", "WeilOp", "weil_operator", "weil_inverse", "schrodinger_upper",
    "schrodinger_weyl", "operator_cocycle", "operator_cocycle_table", "theta_fn",
    "theta_of_op", "check_intertwining", "check_cocycle_identity", "find_splitting",
    "verify_splitting", "is_multiplicative", "monomial_form",
    "parabolic_homomorphism_counterexample", "heisenberg_elements", "random_heisenberg",
]
