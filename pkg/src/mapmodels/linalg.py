"""Exact linear algebra over the rationals.

Plain Gaussian elimination on ``fractions.Fraction`` entries.  Matrices are
lists of rows.  Everything here is small and dense; the callers' dimensions
are monomial-basis sizes in a degree window.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list  # list[list[Fraction]]


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [row[:] for row in matrix]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix: Matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of ``matrix`` (rows = equations)."""
    if not matrix:
        return [unit_vector(ncols, j) for j in range(ncols)]
    reduced, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -reduced[r][f]
        basis.append(v)
    return basis


def unit_vector(n: int, j: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[j] = Fraction(1)
    return v


class EchelonAccumulator:
    """Incremental echelon span; reports whether each added vector is new.

    Used to pick cocycle representatives that descend to a quotient basis:
    feed the boundary span first, then kernel vectors, keeping those that
    enlarge the span.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []
        self.pivot_cols: list[int] = []

    def reduce(self, vector: list[Fraction]) -> list[Fraction]:
        v = vector[:]
        for row, p in zip(self.rows, self.pivot_cols):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, vector: list[Fraction]) -> bool:
        """Insert a vector; True when it was independent of the span."""
        v = self.reduce(vector)
        pivot = next((c for c in range(self.ncols) if v[c]), None)
        if pivot is None:
            return False
        inv = Fraction(1) / v[pivot]
        v = [a * inv for a in v]
        self.rows.append(v)
        self.pivot_cols.append(pivot)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)


def invert(matrix: Matrix) -> Matrix:
    """Inverse of a square rational matrix; raises on singular input."""
    n = len(matrix)
    aug = [list(matrix[i]) + unit_vector(n, i) for i in range(n)]
    reduced, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular over the rationals")
    return [row[n:] for row in reduced]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return [
        [sum((ra[k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
        for ra in a
    ]
