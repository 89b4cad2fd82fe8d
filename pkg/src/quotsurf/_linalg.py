"""Small exact linear algebra over the rationals (list-of-lists matrices)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = to_fractions(rows)
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, size):
            factor = m[r][col] / p
            if factor:
                for c in range(col, size):
                    m[r][c] -= factor * m[col][c]
    return det


def is_positive_definite(rows: Sequence[Sequence]) -> bool:
    """Sylvester's criterion, via elimination without row exchanges.

    The k-th pivot equals the ratio of consecutive leading principal minors,
    so all pivots are positive exactly when all leading minors are.
    """
    m = to_fractions(rows)
    size = len(m)
    for k in range(size):
        p = m[k][k]
        if p <= 0:
            return False
        for r in range(k + 1, size):
            factor = m[r][k] / p
            if factor:
                for c in range(k, size):
                    m[r][c] -= factor * m[k][c]
    return True


def _rref(m: Matrix, ncols: int) -> list[int]:
    """Row-reduce ``m`` in place over its first ``ncols`` columns."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel."""
    m = to_fractions(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = _rref(m, ncols)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, pc in enumerate(pivots):
            vec[pc] = -m[row][free]
        basis.append(vec)
    return basis


def rank(rows: Sequence[Sequence]) -> int:
    ncols = len(rows[0]) if rows else 0
    return ncols - len(nullspace(rows, ncols))


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of ``rows @ x = rhs``, or None when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    m = to_fractions([list(r) + [b] for r, b in zip(rows, rhs)])
    pivots = _rref(m, ncols)
    if any(row[-1] != 0 and all(x == 0 for x in row[:-1]) for row in m):
        return None
    x = [Fraction(0)] * ncols
    for row, pc in enumerate(pivots):
        x[pc] = m[row][-1]
    return x
