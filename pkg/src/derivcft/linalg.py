"""Exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction`` (or ``int``).  Rank uses
fraction-free Bareiss elimination on a common-denominator integer copy, so
no rank decision ever depends on a tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Sequence

Matrix = List[List[Fraction]]


def _to_integer_rows(a: Sequence[Sequence]) -> List[List[int]]:
    rows = []
    for row in a:
        row = [Fraction(x) for x in row]
        d = 1
        for x in row:
            d = lcm(d, x.denominator)
        rows.append([int(x * d) for x in row])
    return rows


def bareiss_rank(a: Sequence[Sequence]) -> int:
    """Rank via fraction-free Gaussian elimination (all intermediates are integers)."""
    m = _to_integer_rows(a)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                # exact division is guaranteed by Sylvester's identity
                m[r][c] = (p * m[r][c] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rref(a: Sequence[Sequence]) -> tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [x / p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace(a: Sequence[Sequence]) -> List[List[Fraction]]:
    """Basis of the right kernel ``{x : a x = 0}``, one vector per free column."""
    if not a:
        return []
    ncols = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def matvec(a: Sequence[Sequence], x: Sequence) -> List[Fraction]:
    return [sum((Fraction(aij) * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def is_symmetric(a: Sequence[Sequence]) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def psd_pivots(a: Sequence[Sequence]) -> List[Fraction] | None:
    """Exact positive semi-definiteness test by symmetric elimination.

    Returns the diagonal pivots (all >= 0) when ``a`` is PSD and ``None``
    otherwise.  A zero pivot whose row is not identically zero, or any
    negative pivot, disproves semi-definiteness.
    """
    m = [[Fraction(x) for x in row] for row in a]
    size = len(m)
    if not is_symmetric(m):
        return None
    pivots = []
    for k in range(size):
        p = m[k][k]
        if p < 0:
            return None
        if p == 0:
            if any(m[k][j] != 0 for j in range(k, size)):
                return None
            pivots.append(p)
            continue
        for i in range(k + 1, size):
            if m[i][k] == 0:
                continue
            f = m[i][k] / p
            for j in range(k, size):
                m[i][j] -= f * m[k][j]
        pivots.append(p)
    return pivots


def is_psd(a: Sequence[Sequence]) -> bool:
    return psd_pivots(a) is not None


def independent_columns(a: Sequence[Sequence]) -> List[int]:
    """Pivot columns of ``a``: a maximal independent subset of columns."""
    return rref(a)[1] if a else []
