"""Exact Gaussian elimination over the rationals."""

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


class InconsistentSystemError(ValueError):
    """Raised when a linear system has no solution."""


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Args:
        rows: The matrix rows.
        ncols: Number of columns eligible as pivots; defaults to all.

    Returns:
        The reduced matrix (zero rows dropped) and the pivot columns.
    """
    m = _copy(rows)
    if not m:
        return [], []
    width = len(m[0])
    if ncols is None:
        ncols = width
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    reduced = [row for row in m if any(x != 0 for x in row)]
    return reduced, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    reduced, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence,
          ncols: int) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Solves A x = b exactly.

    Returns:
        A particular solution (free variables set to 0) and a nullspace basis.

    Raises:
        InconsistentSystemError: If the system has no solution.
    """
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols)
    for row in reduced:
        if all(x == 0 for x in row[:ncols]):
            raise InconsistentSystemError(
                f"inconsistent system: 0 = {row[ncols]}")
    x = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x, nullspace(rows, ncols)
