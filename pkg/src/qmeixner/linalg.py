"""Exact Gaussian elimination over any field whose elements support + - * / and == 0."""
from __future__ import annotations

from typing import Sequence

from .errors import InconsistentSystem, SingularSystem


def _row_reduce(rows: list, ncols: int):
    """Reduce ``rows`` (augmented) in place; return the pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve a square system exactly; raise :class:`SingularSystem` if it is singular."""
    n = len(matrix)
    if n == 0:
        return []
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivots = _row_reduce(rows, n)
    if len(pivots) < n:
        raise SingularSystem(f"rank {len(pivots)} < {n}")
    return [rows[i][n] for i in range(n)]


def solve_overdetermined(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique exact solution of a consistent overdetermined system.

    Raises :class:`SingularSystem` if the columns are dependent and
    :class:`InconsistentSystem` if some equation is left unsatisfied.
    """
    ncols = len(matrix[0]) if matrix else 0
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivots = _row_reduce(rows, ncols)
    if len(pivots) < ncols:
        raise SingularSystem(f"column rank {len(pivots)} < {ncols}")
    for row in rows[ncols:]:
        if row[ncols] != 0:
            raise InconsistentSystem(f"residual {row[ncols]} in overdetermined system")
    return [rows[i][ncols] for i in range(ncols)]


def determinant(matrix: Sequence[Sequence]):
    """Exact determinant by elimination."""
    rows = [list(r) for r in matrix]
    n = len(rows)
    det = 1
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return 0 * det
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det
