"""Small exact linear algebra over Fraction: rank, nullspace, row reduction.

Matrices are lists of rows (lists of Fraction).  Everything here is dense
Gaussian elimination; problem sizes in this package stay in the low hundreds.
"""

from __future__ import annotations

from fractions import Fraction


def rref(matrix: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(matrix: list[list[Fraction]]) -> int:
    if not matrix:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix: list[list[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right nullspace {v : M v = 0}."""
    if not matrix:
        if ncols is None:
            return []
        basis = []
        for i in range(ncols):
            v = [Fraction(0)] * ncols
            v[i] = Fraction(1)
            basis.append(v)
        return basis
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def in_span(vectors: list[list[Fraction]], target: list[Fraction]) -> bool:
    """True iff target lies in the span of the given vectors."""
    if not any(target):
        return True
    if not vectors:
        return False
    base = rank(vectors)
    return rank(vectors + [target]) == base
