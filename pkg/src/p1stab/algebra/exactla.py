"""Exact linear algebra over Q and dense polynomial arithmetic over Q[z].

Everything here is pure stdlib (``fractions.Fraction`` / python ints); no
floating point enters. Sizes are small (matrices up to a few hundred rows,
polynomial degrees below ~100), so straightforward echelon forms and Laplace
determinants are the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from itertools import combinations

Vec = list[Fraction]
Poly = list[Fraction]  # dense coefficients, ascending powers, no trailing zeros


def frac(x) -> Fraction:
    """Coerce ints, strings like '2/3' and Fractions to Fraction."""
    return x if isinstance(x, Fraction) else Fraction(x)


def _int_rows(rows: list[Vec]) -> list[list[int]]:
    """Clear denominators row by row (content preserved up to positive scale)."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def row_echelon(rows: list[Vec]) -> tuple[list[list[int]], list[int]]:
    """Integer fraction-free row echelon form.

    Returns (echelon rows, pivot column indices). Row scaling is arbitrary,
    so this is suitable for rank / nullspace, not for solving with a rhs.
    """
    m = _int_rows(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        a = pr[c]
        for i in range(r + 1, len(m)):
            b = m[i][c]
            if b == 0:
                continue
            row = [a * x - b * y for x, y in zip(m[i], pr)]
            g = 0
            for v in row:
                g = gcd(g, v)
            if g > 1:
                row = [v // g for v in row]
            m[i] = row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def mat_rank(rows: list[Vec]) -> int:
    if not rows:
        return 0
    return len(row_echelon(rows)[1])


def nullspace(rows: list[Vec], n_cols: int | None = None) -> list[Vec]:
    """Basis of the right nullspace of the matrix with the given rows."""
    if n_cols is None:
        if not rows:
            raise ValueError("n_cols required for an empty matrix")
        n_cols = len(rows[0])
    if not rows:
        return [[Fraction(i == j) for i in range(n_cols)] for j in range(n_cols)]
    ech, pivots = row_echelon(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        # back-substitute pivot coordinates from the bottom up
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            s = sum((Fraction(ech[i][c]) * v[c] for c in range(pc + 1, n_cols)), Fraction(0))
            v[pc] = -s / Fraction(ech[i][pc])
        basis.append(v)
    return basis


def span_signature(vectors: list[Vec]) -> tuple:
    """Canonical (RREF) signature of the span; equal iff spans are equal."""
    if not vectors:
        return ()
    ech, pivots = row_echelon(vectors)
    n = len(vectors[0])
    rows = [[Fraction(x) for x in r] for r in ech]
    # normalize to reduced form over Q
    for i in range(len(pivots) - 1, -1, -1):
        pc = pivots[i]
        rows[i] = [x / rows[i][pc] for x in rows[i]]
        for j in range(i):
            f = rows[j][pc]
            if f:
                rows[j] = [a - f * b for a, b in zip(rows[j], rows[i])]
    return tuple(tuple(r) for r in rows)


# ----------------------------------------------------------------------------
# dense polynomials over Q
# ----------------------------------------------------------------------------

PZERO: Poly = []
PONE: Poly = [Fraction(1)]


def ptrim(cs: Poly) -> Poly:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def pdeg(a: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(a) - 1


def padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return ptrim(out)


def pscale(a: Poly, c: Fraction) -> Poly:
    if c == 0:
        return []
    return [x * c for x in a]


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pscale(b, Fraction(-1)))


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return ptrim(out)


def peval(a: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pmonomial(c, power: int) -> Poly:
    return ptrim([Fraction(0)] * power + [frac(c)])


def pgcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (Euclid)."""
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _pmod(a: Poly, b: Poly) -> Poly:
    r = list(a)
    db, lead = pdeg(b), b[-1]
    while pdeg(r) >= db:
        f = r[-1] / lead
        shift = pdeg(r) - db
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        ptrim(r)
        if not r:
            break
    return r


def pdet(mat: list[list[Poly]]) -> Poly:
    """Determinant of a small square matrix of polynomials (Laplace)."""
    n = len(mat)
    if n == 0:
        return list(PONE)
    if n == 1:
        return list(mat[0][0])
    if n == 2:
        return psub(pmul(mat[0][0], mat[1][1]), pmul(mat[0][1], mat[1][0]))
    out: Poly = []
    for j in range(n):
        if not mat[0][j]:
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in mat[1:]]
        term = pmul(mat[0][j], pdet(minor))
        out = padd(out, term) if j % 2 == 0 else psub(out, term)
    return out


def all_minors(mat: list[list[Poly]], size: int) -> list[tuple[tuple[int, ...], tuple[int, ...], Poly]]:
    """All size x size minors as (row_set, col_set, det)."""
    n_rows, n_cols = len(mat), len(mat[0]) if mat else 0
    out = []
    for rows in combinations(range(n_rows), size):
        for cols in combinations(range(n_cols), size):
            sub = [[mat[i][j] for j in cols] for i in rows]
            out.append((rows, cols, pdet(sub)))
    return out
