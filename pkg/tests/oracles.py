"""Independent floating-point oracles.

Nothing here goes through the package's models, operators or cyclotomic
arithmetic: Heisenberg functions are plain dicts on F_q^{2d} x F_q, Gauss and
character sums are complex exponentials, cohomology is brute-force Laurent
algebra.  Library values are compared after embedding Q(zeta_N) into C with
zeta_N = exp(2 pi i / N).
"""

from __future__ import annotations

import cmath
import itertools

TOL = 1e-7


def embed(x) -> complex:
    z = cmath.exp(2j * cmath.pi / x.N)
    return sum(float(c) * z ** j for j, c in enumerate(x.coeffs()))


def e(a: int, q: int) -> complex:
    return cmath.exp(2j * cmath.pi * (a % q) / q)


def close(a: complex, b: complex, tol: float = TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def gauss(q: int) -> complex:
    return sum(e(x * x, q) for x in range(q))


# -- Heisenberg group as raw tuples -------------------------------------------

def omega(u, v, q):
    d = len(u) // 2
    return (sum(u[i] * v[d + i] for i in range(d)) - sum(u[d + i] * v[i] for i in range(d))) % q


def hmul(h1, h2, q):
    (m1, a1), (m2, a2) = h1, h2
    inv2 = (q + 1) // 2
    m = tuple((x + y) % q for x, y in zip(m1, m2))
    return m, (a1 + a2 + inv2 * omega(m1, m2, q)) % q


def span(rows, q):
    pts = set()
    for c in itertools.product(range(q), repeat=len(rows)):
        pts.add(tuple(sum(ci * r[k] for ci, r in zip(c, rows)) % q for k in range(len(rows[0]))))
    return pts


def heis(d, q):
    return [(m, a) for m in itertools.product(range(q), repeat=2 * d) for a in range(q)]


def standard_vector(Lpts, d, q):
    """The function on H with f(l, a) = psi(a) for l in L and 0 off L x F_q."""
    return {(m, a): (e(a, q) if m in Lpts else 0j) for (m, a) in heis(d, q)}


def apply_intertwiner(f, L2pts, d, q):
    """(F f)(h) = sum_{z in L2} f((z, 0) h) on full functions."""
    return {h: sum(f[hmul((z, 0), h, q)] for z in L2pts) for h in heis(d, q)}


def theta_loop(L1rows, L2rows, Vrows, d, q) -> complex:
    """Scalar by which F_{L2,L1} F_{V,L2} F_{L1,V} acts, on full functions on H."""
    L1, L2, V = (span(r, q) for r in (L1rows, L2rows, Vrows))
    f = standard_vector(L1, d, q)
    g = apply_intertwiner(apply_intertwiner(apply_intertwiner(f, V, d, q), L2, d, q), L1, d, q)
    ident = ((0,) * (2 * d), 0)
    c = g[ident] / f[ident]
    assert all(close(g[h], c * f[h]) for h in f), "loop is not scalar on the standard vector"
    return c


# -- quadratic forms -----------------------------------------------------------

def s_psi(b, q) -> complex:
    d = len(b)
    return sum(e(sum(b[i][j] * v[i] * v[j] for i in range(d) for j in range(d)), q)
               for v in itertools.product(range(q), repeat=d))


def cone_count(t, q) -> int:
    d = len(t)
    return sum(1 for v in itertools.product(range(q), repeat=d)
               if all((v[i] * v[j] - t[i][j]) % q == 0 for i in range(d) for j in range(d)))


def sym_forms(d, q):
    slots = [(i, j) for i in range(d) for j in range(i, d)]
    for vals in itertools.product(range(q), repeat=len(slots)):
        b = [[0] * d for _ in range(d)]
        for (i, j), x in zip(slots, vals):
            b[i][j] = b[j][i] = x
        yield b


def fourier(f, d, q, root) -> dict:
    """b -> root^{-D} sum_t f(t) psi(sum_ij t_ij b_ij)."""
    D = d * (d + 1) // 2
    forms = [tuple(map(tuple, b)) for b in sym_forms(d, q)]
    return {b: sum(f[t] * e(sum(t[i][j] * b[i][j] for i in range(d) for j in range(d)), q) for t in forms)
            / root ** D for b in forms}


# -- P^1 -------------------------------------------------------------------------

def laurent_mul(p, r):
    out = {}
    for i, x in p.items():
        for j, y in r.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


def line_theta(a: int, ecoeffs: dict, q: int) -> complex:
    """n = 1: sum over s in H^0(O(-2-a)) of psi(res(e s^2))."""
    top = -2 - a
    total = 0j
    for c in itertools.product(range(q), repeat=top + 1):
        s = {k: x for k, x in enumerate(c) if x}
        total += e(laurent_mul(ecoeffs, laurent_mul(s, s)).get(-1, 0), q)
    return total


def line_h0(a: int, ecoeffs: dict, q: int) -> int:
    """n = 1: h0(M) = dim ker(H^0(O(-2-a)) -> H^1(O(a)), s -> e s), by counting the kernel."""
    top = -2 - a
    kernel = 0
    for c in itertools.product(range(q), repeat=top + 1):
        s = {k: x for k, x in enumerate(c) if x}
        prod = laurent_mul(ecoeffs, s)
        if all(prod.get(j, 0) % q == 0 for j in range(a + 1, 0)):
            kernel += 1
    dim = 0
    while q ** dim < kernel:
        dim += 1
    assert q ** dim == kernel
    return dim
