"""Exact integer linear algebra for small dense systems.

Determinants use fraction-free Bareiss elimination; linear solves run over
``Fraction`` and never touch floating point.  The matrices here are tiny
(one row per blow-up), so no effort is spent on asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import MatrixError

IntMatrix = Sequence[Sequence[int]]


def bareiss_determinant(matrix: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise MatrixError("matrix is not square")
    if n == 0:
        return 1
    m = [[int(v) for v in row] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def leading_minors(matrix: IntMatrix) -> tuple[int, ...]:
    """Determinants of all leading principal submatrices."""
    n = len(matrix)
    return tuple(
        bareiss_determinant([row[: t + 1] for row in matrix[: t + 1]]) for t in range(n)
    )


def solve_row_system(matrix: IntMatrix, rhs: Sequence[int]) -> tuple[int, ...]:
    """Solve x * matrix = rhs exactly for a square integer matrix.

    The matrix must be invertible; an integer solution is required (it always
    exists when the determinant is a unit) and verified by back-substitution.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise MatrixError("matrix is not square")
    if len(rhs) != n:
        raise MatrixError("right-hand side has wrong length")
    if n == 0:
        return ()
    # Transpose so the unknowns form an ordinary column system.
    aug = [[Fraction(matrix[r][c]) for r in range(n)] + [Fraction(rhs[c])] for c in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise MatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        for r in range(n):
            if r == col or aug[r][col] == 0:
                continue
            factor = aug[r][col] / pv
            for c in range(col, n + 1):
                aug[r][c] -= factor * aug[col][c]
    values = []
    for col in range(n):
        v = aug[col][n] / aug[col][col]
        if v.denominator != 1:
            raise MatrixError("system has no integer solution; matrix is not unimodular")
        values.append(int(v))
    for c in range(n):
        if sum(values[r] * matrix[r][c] for r in range(n)) != rhs[c]:
            raise MatrixError("solution verification failed")
    return tuple(values)
