"""Theta constants, the Maslov index gamma and the 2-cocycle they define."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import TransversalityError
from .heisenberg import half, intertwiner, normalized_intertwiner, scalar_of
from .scalars import CycloNum, legendre, psi_sum, sqrt_q_power
from .symplectic import GroupElem, Lagrangian, b_coordinates, intersection_dim, transverse

# Quadratic form on V* entering the Gauss-sum side: v* -> +1/2 <b v*, v*>,
# with <b u, u> taken in the order (V, L2).  Fixed by exhaustive comparison
# against the operator loop at d = 1, q = 3.
GAUSS_PAIRING_SIGN = 1


def theta_squared(d: int, i: int, q: int) -> int:
    return legendre(-1, q) ** (d - i) * q ** (3 * d + i)


@dataclass(frozen=True)
class ThetaValue:
    value: CycloNum
    triple: tuple[Lagrangian, Lagrangian, Lagrangian]
    i: int

    def __post_init__(self):
        L1 = self.triple[0]
        if self.value * self.value != theta_squared(L1.d, self.i, L1.q):
            raise ArithmeticError(f"theta^2 identity fails for {self.triple}")


@dataclass(frozen=True)
class GammaValue:
    value: CycloNum
    triple: tuple[Lagrangian, Lagrangian, Lagrangian]

    def __post_init__(self):
        if self.value ** 8 != 1:
            raise ArithmeticError(f"gamma is not a root of unity for {self.triple}")


def _check_transverse(L1, L2, V):
    if not (transverse(V, L1) and transverse(V, L2)):
        raise TransversalityError("V must meet L1 and L2 trivially")


@lru_cache(maxsize=None)
def theta_triple(L1: Lagrangian, L2: Lagrangian, V: Lagrangian) -> ThetaValue:
    """Scalar of F_{L2,L1} o F_{V,L2} o F_{L1,V} (S_{L1} -> S_V -> S_{L2} -> S_{L1})."""
    _check_transverse(L1, L2, V)
    loop = intertwiner(L2, L1) @ intertwiner(V, L2) @ intertwiner(L1, V)
    return ThetaValue(scalar_of(loop), (L1, L2, V), intersection_dim(L1, L2))


def theta_gauss(L1: Lagrangian, L2: Lagrangian, V: Lagrangian) -> CycloNum:
    """q^d * sum over v* of psi(1/2 <b v*, v*>), computed from the b-coordinates."""
    _check_transverse(L1, L2, V)
    q, d = V.q, V.d
    B = b_coordinates(L1, L2, V).b
    h = half(q) * GAUSS_PAIRING_SIGN
    counts = [0] * q
    for c in itertools.product(range(q), repeat=d):
        val = sum(B[i][j] * c[i] * c[j] for i in range(d) for j in range(d))
        counts[h * val % q] += 1
    return psi_sum(counts, q) * q ** d


@lru_cache(maxsize=None)
def gamma(L1: Lagrangian, L2: Lagrangian, L3: Lagrangian) -> GammaValue:
    """Scalar of the normalised loop F_{L2,L1} o F_{L3,L2} o F_{L1,L3}."""
    loop = (normalized_intertwiner(L2, L1) @ normalized_intertwiner(L3, L2)
            @ normalized_intertwiner(L1, L3))
    return GammaValue(scalar_of(loop), (L1, L2, L3))


def theta_from_gamma(L1: Lagrangian, L2: Lagrangian, L3: Lagrangian) -> CycloNum:
    """q^{(3d+i)/2} gamma(L1, L2, L3) for a pairwise transverse triple."""
    _check_transverse(L1, L2, L3)
    k = 3 * L1.d + intersection_dim(L1, L2)
    return sqrt_q_power(L1.q, k) * gamma(L1, L2, L3).value


def cocycle(g1: GroupElem, g2: GroupElem, L0: Lagrangian) -> CycloNum:
    """gamma(L0, g1 L0, g1 g2 L0)."""
    return gamma(L0, L0.act(g1), L0.act(g1 @ g2)).value


def cocycle_table(group, L0: Lagrangian) -> dict[tuple[GroupElem, GroupElem], CycloNum]:
    images = {g: L0.act(g) for g in group}
    table = {}
    for g1 in group:
        for g2 in group:
            table[g1, g2] = gamma(L0, images[g1], images[g1 @ g2]).value
    return table
