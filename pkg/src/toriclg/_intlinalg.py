"""Exact linear algebra over the rationals and over the integers.

Everything here runs on small dense matrices (dimension at most ~20), so the
implementations favour clarity over asymptotics: fraction Gaussian
elimination, and a transform-tracking Smith normal form used to compute
saturated sublattices and to extend a partial lattice basis to a full one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = list[Fraction]


def frac_matrix(rows: Sequence[Sequence]) -> list[Row]:
    return [[Fraction(x) for x in row] for row in rows]


def frac_rank(rows: Sequence[Sequence]) -> int:
    m = frac_matrix(rows)
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    col = 0
    while rank < len(m) and col < ncols:
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def frac_solve(
    a: Sequence[Sequence], b: Sequence
) -> tuple[Row, list[Row]] | None:
    """Solve a x = b over the rationals.

    Returns ``(particular, nullspace_basis)``, or ``None`` when inconsistent.
    The nullspace basis is empty exactly when the solution is unique.
    """
    m = frac_matrix(a)
    rhs = [Fraction(x) for x in b]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        rhs[row], rhs[piv] = rhs[piv], rhs[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        rhs[row] *= inv
        for r in range(nrows):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
                rhs[r] -= f * rhs[row]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    for r in range(row, nrows):
        if rhs[r] != 0:
            return None
    particular = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        particular[col] = rhs[r]
    free_cols = [c for c in range(ncols) if c not in pivots]
    nullspace: list[Row] = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -m[r][fc]
        nullspace.append(vec)
    return particular, nullspace


def det_int(a: Sequence[Sequence[int]]) -> int:
    """Determinant of a small integer matrix, exact."""
    m = frac_matrix(a)
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    assert det.denominator == 1
    return det.numerator


IntMatrix = list[list[int]]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(
    a: Sequence[Sequence[int]],
) -> tuple[IntMatrix, IntMatrix, IntMatrix, IntMatrix]:
    """Smith-style diagonalisation with transforms.

    Returns ``(u, d, v, v_inv)`` with ``u a v = d``, ``u`` and ``v``
    unimodular, and ``d`` diagonal (entries not necessarily forming a
    divisibility chain, which none of the callers need).
    """
    d: IntMatrix = [[int(x) for x in row] for row in a]
    k = len(d)
    n = len(d[0]) if d else 0
    u = _identity(k)
    v = _identity(n)
    v_inv = _identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def add_row(i, j, q):  # row_i += q * row_j
        d[i] = [x + q * y for x, y in zip(d[i], d[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_col(i, j, q):  # col_i += q * col_j  (v_inv: row_j -= q * row_i)
        for row in d:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]
        v_inv[j] = [x - q * y for x, y in zip(v_inv[j], v_inv[i])]

    t = 0
    while t < k and t < n:
        # locate smallest nonzero entry in the remaining block
        best = None
        for i in range(t, k):
            for j in range(t, n):
                if d[i][j] != 0 and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        dirty = False
        for i in range(t + 1, k):
            q = -(d[i][t] // d[t][t])
            if q:
                add_row(i, t, q)
            if d[i][t] != 0:
                dirty = True
        for j in range(t + 1, n):
            q = -(d[t][j] // d[t][t])
            if q:
                add_col(j, t, q)
            if d[t][j] != 0:
                dirty = True
        if dirty:
            continue  # remainders left; pick a new, smaller pivot
        if d[t][t] < 0:
            add_row(t, t, -2)  # row_t += -2 row_t, i.e. row_t *= -1
        t += 1
    return u, d, v, v_inv


def saturation_basis(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Basis of the saturated lattice  Z^n  intersected with the rational
    span of ``rows``: the first rank(rows) rows of the inverse column
    transform of the Smith form."""
    if not rows:
        return []
    _, d, _, v_inv = smith_normal_form(rows)
    rank = sum(1 for t in range(min(len(d), n)) if d[t][t] != 0)
    return [list(v_inv[t]) for t in range(rank)]


def extend_basis_in_lattice(
    partial: Sequence[Sequence[int]], lattice: Sequence[Sequence[int]]
) -> IntMatrix:
    """Rows completing ``partial`` to a basis of the lattice spanned by the
    basis ``lattice``.

    ``partial`` must span a saturated sublattice of the target lattice (its
    coordinate matrix then has all elementary divisors 1, which is checked).
    Returns only the new rows, in ambient coordinates.
    """
    from .errors import IntegralityFailure

    r = len(lattice)
    if not partial:
        return [list(row) for row in lattice]
    coords: IntMatrix = []
    for row in partial:
        sol = frac_solve([[lattice[i][j] for i in range(r)] for j in range(len(row))], row)
        if sol is None or sol[1]:
            raise IntegralityFailure("partial basis does not sit inside the lattice")
        vec, _ = sol
        if any(x.denominator != 1 for x in vec):
            raise IntegralityFailure("partial basis has fractional lattice coordinates")
        coords.append([x.numerator for x in vec])
    _, d, _, v_inv = smith_normal_form(coords)
    k = len(coords)
    if any(abs(d[t][t]) != 1 for t in range(k)):
        raise IntegralityFailure("partial basis is not saturated in the lattice")
    out: IntMatrix = []
    for t in range(k, r):
        row = v_inv[t]
        out.append([
            sum(row[i] * lattice[i][j] for i in range(r))
            for j in range(len(lattice[0]))
        ])
    return out
