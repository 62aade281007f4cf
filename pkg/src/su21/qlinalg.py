"""Exact linear algebra over Q.

Matrices are plain lists of rows holding ints or Fractions. Elimination is
fraction-free (Bareiss): rows are scaled to integers first, every division
in the forward sweep is exact, and Fractions only appear in the final
back-substitution.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Row = Sequence  # of int | Fraction


def _int_row(row: Row) -> list[int]:
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    return [int(x * den) for x in row]


def bareiss(rows: Sequence[Row]) -> tuple[list[list[int]], list[int]]:
    """Row echelon form of an integer-scaled copy of `rows`.

    Returns the echelon rows (only the nonzero ones) and the pivot columns.
    """
    M = [_int_row(r) for r in rows]
    if not M:
        return [], []
    nrows, ncols = len(M), len(M[0])
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        for i in range(r + 1, nrows):
            mic = M[i][c]
            row_i = M[i]
            row_r = M[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows: Sequence[Row]) -> int:
    return len(bareiss(rows)[1])


def _back_substitute(ech: list[list[int]], pivots: list[int], n: int) -> list[Fraction]:
    """Solve an echelon system whose last column is the right-hand side."""
    x = [Fraction(0)] * n
    for row, c in zip(reversed(ech), reversed(pivots)):
        s = Fraction(row[n])
        for j in range(c + 1, n):
            if row[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def solve(A: Sequence[Row], b: Row) -> list[Fraction] | None:
    """One solution of A x = b, free variables set to 0; None if inconsistent."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    ech, pivots = bareiss(aug)
    if pivots and pivots[-1] == n:
        return None
    return _back_substitute(ech, pivots, n)


def solve_many(A: Sequence[Row], B: Sequence[Row]) -> list[list[Fraction]] | None:
    """Solve A X = B column by column (B given as a list of right-hand sides)."""
    out = []
    for b in B:
        x = solve(A, b)
        if x is None:
            return None
        out.append(x)
    return out


def nullspace(A: Sequence[Row]) -> list[list[Fraction]]:
    n = len(A[0])
    ech, pivots = bareiss(A)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, c in zip(reversed(ech), reversed(pivots)):
            s = sum((row[j] * x[j] for j in range(c + 1, n) if row[j]), Fraction(0))
            x[c] = -s / row[c]
        basis.append(x)
    return basis


def inverse(A: Sequence[Row]) -> list[list[Fraction]]:
    n = len(A)
    cols = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        x = solve(A, e)
        if x is None:
            raise ZeroDivisionError("singular rational matrix")
        cols.append(x)
    if rank(A) < n:
        raise ZeroDivisionError("singular rational matrix")
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def lattice_basis(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Hermite-style integer row reduction; returns a Z-basis of the span."""
    M = [list(v) for v in vectors if any(v)]
    if not M:
        return []
    ncols = len(M[0])
    basis = []
    for c in range(ncols):
        rows = [r for r in M if r[c] != 0]
        if not rows:
            continue
        rest = [r for r in M if r[c] == 0]
        # Euclid down the column until one row holds the gcd
        while len(rows) > 1:
            rows.sort(key=lambda r: abs(r[c]))
            head = rows[0]
            nxt = [head]
            for r in rows[1:]:
                q = r[c] // head[c]
                r2 = [a - q * b for a, b in zip(r, head)]
                if r2[c] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            rows = nxt
        head = rows[0]
        if head[c] < 0:
            head = [-a for a in head]
        basis.append(head)
        M = rest
    return basis


def charpoly(A: Sequence[Sequence], one=1) -> list:
    """Characteristic polynomial det(xI - A), coefficients low to high.

    Faddeev-LeVerrier; works over any commutative ring of characteristic 0
    whose elements support division by Python ints.
    """
    n = len(A)
    zero = one - one
    M = [[zero] * n for _ in range(n)]
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    for k in range(1, n + 1):
        # M <- A M + c_{n-k+1} I
        AM = [[sum((A[i][l] * M[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] = AM[i][i] + coeffs[n - k + 1]
        M = AM
        AMk = [[sum((A[i][l] * M[l][j] for l in range(n)), zero) for j in range(n)] for i in range(n)]
        tr = sum((AMk[i][i] for i in range(n)), zero)
        coeffs[n - k] = -tr / k if not isinstance(tr, int) else Fraction(-tr, k)
    return coeffs


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
