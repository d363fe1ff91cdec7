"""Exact rational and integer linear algebra on small dense matrices.

Matrices are lists of rows; vectors are lists/tuples.  Everything is done
with :class:`fractions.Fraction` or Python ints, so results are exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = Sequence[Fraction]
Matrix = Sequence[Sequence[Fraction]]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def transpose(m: Matrix) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Vector) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def _int_row(row) -> tuple[list[int], int]:
    """Row scaled to integers, with the scale factor used."""
    fr = [as_fraction(x) for x in row]
    den = 1
    for v in fr:
        den = lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in fr], den


def _bareiss(a: list[list[int]], ncols: int):
    """Fraction-free row echelon form in place; returns (pivot columns, row swaps)."""
    n = len(a)
    prev = 1
    row = 0
    pivots = []
    swaps = 0
    for c in range(ncols):
        p = next((r for r in range(row, n) if a[r][c] != 0), None)
        if p is None:
            continue
        if p != row:
            a[row], a[p] = a[p], a[row]
            swaps += 1
        piv = a[row][c]
        for r in range(row + 1, n):
            arc = a[r][c]
            a[r] = [(piv * x - arc * y) // prev for x, y in zip(a[r], a[row])]
        prev = piv
        pivots.append(c)
        row += 1
        if row == n:
            break
    return pivots, swaps


def det(m: Matrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    rows, scale = [], 1
    for r in m:
        ir, den = _int_row(r)
        rows.append(ir)
        scale *= den
    pivots, swaps = _bareiss(rows, n)
    if len(pivots) < n:
        return Fraction(0)
    return Fraction((-1) ** swaps * rows[n - 1][n - 1], scale)


def rank(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    rows = [_int_row(v)[0] for v in vectors]
    return len(_bareiss(rows, len(rows[0]))[0])


def inverse(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    a = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def solve_columns(cols: Sequence[Vector], x: Vector) -> list[Fraction] | None:
    """Coefficients a with sum_k a_k cols[k] == x, or None if x is not in the span.

    The columns must be linearly independent (otherwise ValueError).
    """
    n = len(x)
    d = len(cols)
    rows = [_int_row([cols[k][i] for k in range(d)] + [x[i]])[0] for i in range(n)]
    pivots, _ = _bareiss(rows, d + 1)
    if pivots[:d] != list(range(d)) or len(pivots) > d and pivots[d] < d:
        raise ValueError("dependent columns")
    if len(pivots) > d:
        return None
    sol = [Fraction(0)] * d
    for r in range(d - 1, -1, -1):
        acc = Fraction(rows[r][d])
        for k in range(r + 1, d):
            acc -= rows[r][k] * sol[k]
        sol[r] = acc / rows[r][r]
    return sol


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def common_denominator(values) -> int:
    den = 1
    for v in values:
        den = lcm(den, as_fraction(v).denominator)
    return den


def primitive_integer_vector(v: Vector) -> tuple[int, ...]:
    """The primitive integer vector on the ray Q_{>0} v."""
    den = common_denominator(v)
    ints = [int(as_fraction(x) * den) for x in v]
    g = 0
    for k in ints:
        g = gcd(g, k)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(k // g for k in ints)


def hnf_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-echelon Hermite basis of the integer lattice spanned by ``rows``.

    Returned rows have strictly increasing pivot columns with positive
    pivots; entries above each pivot are reduced to ``[0, pivot)``.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    basis: list[list[int]] = []
    pivcols: list[int] = []
    for col in range(ncols):
        nz = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            keep = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r2 = [x - q * y for x, y in zip(r, p)]
                if r2[col] != 0:
                    keep.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = keep
        if nz:
            p = nz[0]
            if p[col] < 0:
                p = [-x for x in p]
            basis.append(p)
            pivcols.append(col)
        work = rest
        if not work:
            break
    for i in range(len(basis)):
        c = pivcols[i]
        for k in range(i):
            q = basis[k][c] // basis[i][c]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[i])]
    return basis


def coset_representatives(square_int: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Representatives of Z^d / M Z^d for a nonsingular integer d x d matrix M.

    The lattice M Z^d is spanned by the columns of M.
    """
    h = hnf_rows(transpose(square_int))
    d = len(square_int)
    if len(h) != d:
        raise ValueError("singular matrix")
    diag = [h[i][i] for i in range(d)]
    reps: list[tuple[int, ...]] = [()]
    for i in range(d):
        reps = [r + (k,) for r in reps for k in range(diag[i])]
    return reps
