"""Small dense linear algebra over a prime field F_q.

Matrices are lists of integer rows; all results are reduced mod q.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

Matrix = list[list[int]]


def mat(rows: Sequence[Sequence[int]], q: int) -> Matrix:
    return [[int(x) % q for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], q: int) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % q for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int], q: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % q for row in a]


def rref(a: Sequence[Sequence[int]], q: int) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    m = mat(a, q)
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, q)
        m[r] = [x * inv % q for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def rank(a: Sequence[Sequence[int]], q: int) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a, q)[1])


def nullspace(a: Sequence[Sequence[int]], q: int, ncols: int | None = None) -> Matrix:
    """Basis (as rows) of {x : a x = 0}."""
    if ncols is None:
        ncols = len(a[0])
    if not a:
        return identity(ncols)
    red, piv = rref(a, q)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(red, piv):
            v[p] = (-row[f]) % q
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence[int]], b: Sequence[int], q: int) -> list[int] | None:
    """One solution x of a x = b, or None."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, piv = rref(aug, q)
    if n in piv:
        return None
    x = [0] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return x


def inverse(a: Sequence[Sequence[int]], q: int) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(mat(a, q), identity(n))]
    red, piv = rref(aug, q)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular over F_q")
    return [row[n:] for row in red]


def det(a: Sequence[Sequence[int]], q: int) -> int:
    m = mat(a, q)
    n = len(m)
    d = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            d = -d
        d = d * m[c][c] % q
        inv = pow(m[c][c], -1, q)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % q
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[c])]
    return d % q


def vectors(n: int, q: int) -> Iterator[tuple[int, ...]]:
    """All of F_q^n in lexicographic order."""
    return itertools.product(range(q), repeat=n)


def index_of(v: Sequence[int], q: int) -> int:
    idx = 0
    for x in v:
        idx = idx * q + (x % q)
    return idx


def vector_at(idx: int, n: int, q: int) -> tuple[int, ...]:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        idx, out[k] = divmod(idx, q)
    return tuple(out)


def general_linear(n: int, q: int, limit: int | None = None) -> Iterator[Matrix]:
    """All invertible n x n matrices over F_q (brute force)."""
    if limit is not None and q ** (n * n) > limit * 64:
        raise OverflowError(f"GL_{n}(F_{q}) enumeration too large")
    for entries in itertools.product(range(q), repeat=n * n):
        m = [list(entries[i * n:(i + 1) * n]) for i in range(n)]
        if det(m, q):
            yield m


def projective_points(n: int, q: int) -> Iterator[tuple[int, ...]]:
    """One normalised representative (first nonzero coordinate 1) per line in F_q^n."""
    for v in vectors(n, q):
        nz = next((x for x in v if x), 0)
        if nz == 1:
            yield v
