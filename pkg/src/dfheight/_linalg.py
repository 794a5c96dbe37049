"""Exact Gaussian elimination over any field whose elements support
``+ - * /`` and truthiness as a zero test."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _inv(x):
    return Fraction(1, x) if isinstance(x, int) else 1 / x


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """One solution of ``A x = b``, free variables set to zero.

    Returns ``None`` when the system is inconsistent.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = _inv(aug[row][col])
        aug[row] = [x * inv for x in aug[row]]
        for i in range(nrows):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    for i in range(row, nrows):
        if aug[i][ncols]:
            return None
    x: list = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = aug[i][ncols]
    return x


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of the right kernel of ``rows``."""
    aug = [list(r) for r in rows]
    nrows = len(aug)
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, nrows) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = _inv(aug[row][col])
        aug[row] = [x * inv for x in aug[row]]
        for i in range(nrows):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v: list = [0] * ncols
        v[fcol] = 1
        for i, pcol in enumerate(pivots):
            v[pcol] = -aug[i][fcol]
        basis.append(v)
    return basis
