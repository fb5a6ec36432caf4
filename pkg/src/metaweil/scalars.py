"""Exact arithmetic in the cyclotomic field Q(zeta_N), N = 4p.

Every character sum, operator entry and normalising constant handled by the
library lives in this field.  Elements are stored in the power basis of
Q[x]/(Phi_N(x)) with an integer numerator vector and a positive common
denominator, reduced so that equality is plain tuple equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np


class FieldMismatch(ValueError):
    pass


def is_odd_prime(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    return all(q % k for k in range(3, math.isqrt(q) + 1, 2))


def check_modulus(q: int) -> int:
    if not is_odd_prime(q):
        raise ValueError(f"q must be an odd prime, got {q}")
    return q


# -- integer polynomial helpers (lists, lowest degree first) ---------------

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic
    num = list(num)
    if len(num) < len(den):
        return [0], num
    quot = [0] * (len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        quot[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    return quot, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for k in range(1, n):
        if n % k == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(k)))
            assert not any(rem)
    return tuple(poly)


class _Basis:
    """Reduction tables for Q[x]/(Phi_N)."""

    def __init__(self, N: int):
        self.N = N
        phi = list(cyclotomic_polynomial(N))
        self.deg = deg = len(phi) - 1
        # x^k mod Phi_N for 0 <= k < max(N, 2*deg - 1)
        top = max(N, 2 * deg - 1)
        rows = []
        cur = [0] * deg
        cur[0] = 1
        for _ in range(top):
            rows.append(tuple(cur))
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                for j in range(deg):
                    cur[j] -= carry * phi[j]
        self.xpow = rows
        self.pow_array = np.array(rows[:N], dtype=np.int64)
        self.red_array = np.array(rows[: 2 * deg - 1], dtype=np.int64)
        self.units = [k for k in range(1, N) if math.gcd(k, N) == 1]

    def reduce_long(self, coeffs: Sequence[int]) -> list[int]:
        out = [0] * self.deg
        for k, c in enumerate(coeffs):
            if c:
                row = self.xpow[k]
                for j in range(self.deg):
                    if row[j]:
                        out[j] += c * row[j]
        return out


@lru_cache(maxsize=None)
def basis(N: int) -> _Basis:
    return _Basis(N)


Scalar = Union[int, Fraction]


def _normalize(num: Sequence[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    num, den = [int(c) for c in num], int(den)
    g = math.gcd(den, *num)
    if den < 0:
        g = -g
    if g != 1:
        return tuple(c // g for c in num), den // g
    return tuple(num), den


class CycloNum:
    """An element of Q(zeta_N) in reduced power-basis form."""

    __slots__ = ("N", "num", "den", "_hash")

    def __init__(self, N: int, num: Sequence[int], den: int = 1, _reduced: bool = False):
        self.N = N
        if _reduced:
            self.num, self.den = tuple(num), den
        else:
            self.num, self.den = _normalize(num, den)
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_rational(cls, N: int, value: Scalar) -> "CycloNum":
        value = Fraction(value)
        num = [0] * basis(N).deg
        num[0] = value.numerator
        return cls(N, num, value.denominator)

    @classmethod
    def zero(cls, N: int) -> "CycloNum":
        return cls(N, [0] * basis(N).deg, 1, _reduced=True)

    @classmethod
    def one(cls, N: int) -> "CycloNum":
        return cls.from_rational(N, 1)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycloNum":
        return cls(N, basis(N).xpow[k % N], 1, _reduced=True)

    @classmethod
    def from_powers(cls, N: int, counts: Iterable[int], step: int = 1) -> "CycloNum":
        """sum_k counts[k] * zeta_N^(step*k)."""
        B = basis(N)
        out = [0] * B.deg
        for k, c in enumerate(counts):
            if c:
                row = B.xpow[(step * k) % N]
                for j in range(B.deg):
                    out[j] += c * row[j]
        return cls(N, out, 1)

    @classmethod
    def from_fractions(cls, N: int, coeffs: Sequence[Scalar]) -> "CycloNum":
        fr = [Fraction(c) for c in coeffs]
        if len(fr) != basis(N).deg:
            raise ValueError(f"expected {basis(N).deg} coefficients, got {len(fr)}")
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        return cls(N, [int(c * den) for c in fr], den)

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.N != self.N:
                raise FieldMismatch(f"cannot combine Q(zeta_{self.N}) with Q(zeta_{other.N})")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.from_rational(self.N, other)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return CycloNum(self.N, [a + b for a, b in zip(self.num, o.num)], self.den)
        return CycloNum(self.N, [a * o.den + b * self.den for a, b in zip(self.num, o.num)],
                        self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.N, [-a for a in self.num], self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.num, o.num
        n = len(a)
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        return CycloNum(self.N, basis(self.N).reduce_long(prod), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloNum.one(self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- field structure --------------------------------------------------
    def galois(self, k: int) -> "CycloNum":
        """The automorphism zeta_N -> zeta_N^k (k a unit mod N)."""
        if math.gcd(k, self.N) != 1:
            raise ValueError(f"{k} is not a unit mod {self.N}")
        B = basis(self.N)
        out = [0] * B.deg
        for j, c in enumerate(self.num):
            if c:
                row = B.xpow[(j * k) % self.N]
                for i in range(B.deg):
                    out[i] += c * row[i]
        return CycloNum(self.N, out, self.den)

    def conj(self) -> "CycloNum":
        return self.galois(self.N - 1)

    def norm(self) -> Fraction:
        prod = self
        for k in basis(self.N).units[1:]:
            prod = prod * self.galois(k)
        assert not any(prod.num[1:])
        return Fraction(prod.num[0], prod.den)

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        others = CycloNum.one(self.N)
        for k in basis(self.N).units[1:]:
            others = others * self.galois(k)
        total = self * others
        assert not any(total.num[1:])
        return others * Fraction(total.den, total.num[0])

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(self.N, other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.N == other.N and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.N, self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs()):
            if c:
                mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
                coef = str(c)
                terms.append(coef if not mono else (mono if c == 1 else f"{coef}*{mono}"))
        body = " + ".join(terms) if terms else "0"
        return f"CycloNum[{self.N}]({body})"

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs()]}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloNum":
        N = int(obj["N"])
        return cls.from_fractions(N, [Fraction(int(a), int(b)) for a, b in obj["coeffs"]])


# -- prime field ----------------------------------------------------------

@dataclass(frozen=True)
class FqElem:
    value: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.q)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            if other.q != self.q:
                raise FieldMismatch(f"F_{self.q} vs F_{other.q}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FqElem(self.value + self._other(other), self.q)

    __radd__ = __add__

    def __sub__(self, other):
        return FqElem(self.value - self._other(other), self.q)

    def __rsub__(self, other):
        return FqElem(self._other(other) - self.value, self.q)

    def __neg__(self):
        return FqElem(-self.value, self.q)

    def __mul__(self, other):
        return FqElem(self.value * self._other(other), self.q)

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.q}")
        return FqElem(pow(self.value, -1, self.q), self.q)

    def __truediv__(self, other):
        return self * FqElem(self._other(other), self.q).inverse()

    def __int__(self):
        return self.value


def _residue(a) -> int:
    return a.value if isinstance(a, FqElem) else int(a)


# -- characters and Gauss sums -------------------------------------------

def cyclo_order(q: int) -> int:
    return 4 * check_modulus(q)


def psi(a, q: int, inverse: bool = False) -> CycloNum:
    """Additive character a -> zeta_p^a (or its inverse) in Q(zeta_4p)."""
    N = cyclo_order(q)
    k = _residue(a) % q
    if inverse:
        k = -k
    return CycloNum.zeta(N, 4 * k)


def psi_sum(counts: Sequence[int], q: int, inverse: bool = False) -> CycloNum:
    """sum_a counts[a] * psi(a) for a histogram indexed by residues."""
    return CycloNum.from_powers(cyclo_order(q), counts, step=-4 if inverse else 4)


def legendre(a, q: int) -> int:
    a = _residue(a) % q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


@lru_cache(maxsize=None)
def gauss_sum(q: int, inverse: bool = False) -> CycloNum:
    counts = [0] * q
    for x in range(q):
        counts[x * x % q] += 1
    return psi_sum(counts, q, inverse)


@lru_cache(maxsize=None)
def sqrt_q(q: int) -> CycloNum:
    """The fixed square root of q used for every half-integer twist."""
    g = gauss_sum(q)
    if legendre(-1, q) == 1:
        return g
    return -CycloNum.zeta(cyclo_order(q), q) * g


@lru_cache(maxsize=None)
def sqrt_q_power(q: int, k: int) -> CycloNum:
    s = sqrt_q(q)
    if k >= 0:
        return s ** k
    # s^-1 = s / q
    return (s ** (-k)) * Fraction(1, q ** (-k))


def roots_of_unity(N: int) -> list[CycloNum]:
    return [CycloNum.zeta(N, k) for k in range(N)]


def root_of_unity_exponent(x: CycloNum) -> int | None:
    """k with x = zeta_N^k, or None when x is not an N-th root of unity."""
    for k in range(x.N):
        if x.den == 1 and x.num == basis(x.N).xpow[k]:
            return k
    return None
