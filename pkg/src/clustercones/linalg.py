"""Exact linear algebra over the rationals and integers.

Everything here works on lists of lists of int or Fraction and never
touches floating point. Sizes are modest (a few hundred rows at most), so
plain Gauss-Jordan with Fraction arithmetic and fraction-free Bareiss
elimination are fast enough.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

__all__ = [
    "rref",
    "rank",
    "right_kernel_basis",
    "solve",
    "det_bareiss",
    "invert",
    "ExactSolver",
    "hermite_column_reduce",
    "primitive_vector",
]


def rref(matrix: Sequence[Sequence[Fraction | int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form. Returns (rows, pivot column indices)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix: Sequence[Sequence[Fraction | int]]) -> int:
    return len(rref(matrix)[1])


def primitive_vector(vec: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Scale a rational vector to integers with gcd 1, first nonzero positive."""
    fracs = [Fraction(x) for x in vec]
    if all(f == 0 for f in fracs):
        raise ValueError("zero vector has no primitive form")
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-v for v in ints]
            break
    return tuple(ints)


def right_kernel_basis(matrix: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Primitive integer basis of {v : matrix @ v = 0}.

    Rational elimination, one basis vector per free column, each rescaled
    to a primitive integer vector with first nonzero entry positive.
    """
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(primitive_vector(v))
    return basis


def solve(
    matrix: Sequence[Sequence[Fraction | int]], rhs: Sequence[Fraction | int]
) -> list[Fraction] | None:
    """One exact solution of matrix @ x = rhs, or None if inconsistent.

    Free variables are set to zero.
    """
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    ncols = len(matrix[0]) if matrix else 0
    for r, pc in zip(rows, pivots):
        if pc == ncols:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x


def det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix, fraction-free."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = None
            for i in range(k + 1, n):
                if a[i][k]:
                    swap = i
                    break
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def invert(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]] | None:
    """Exact inverse, or None when singular."""
    n = len(matrix)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in rows[:n]]


class ExactSolver:
    """Repeated exact solves of A @ x = b for a fixed full-column-rank A.

    Picks row indices making a square invertible submatrix once, inverts it
    exactly, then each solve is a matrix-vector product plus a residual
    check against the remaining rows.
    """

    def __init__(self, matrix: Sequence[Sequence[int]]):
        self.matrix = [list(row) for row in matrix]
        ncols = len(self.matrix[0]) if self.matrix else 0
        transposed = [[row[c] for row in self.matrix] for c in range(ncols)]
        _, pivots = rref(transposed)
        if len(pivots) != ncols:
            raise ValueError("matrix does not have full column rank")
        self.pivot_rows = pivots
        square = [self.matrix[r] for r in pivots]
        inv = invert(square)
        assert inv is not None
        self.inverse = inv
        self.ncols = ncols

    def solve(self, rhs: Sequence[Fraction | int]) -> list[Fraction] | None:
        """Solution vector, or None when rhs is outside the column span."""
        if len(rhs) != len(self.matrix):
            raise ValueError("rhs length mismatch")
        sub = [rhs[r] for r in self.pivot_rows]
        x = [
            sum((row[j] * Fraction(sub[j]) for j in range(self.ncols)), Fraction(0))
            for row in self.inverse
        ]
        for row, b in zip(self.matrix, rhs):
            acc = Fraction(0)
            for a, xi in zip(row, x):
                if a:
                    acc += a * xi
            if acc != b:
                return None
        return x


def hermite_column_reduce(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Column-style Hermite normal form of an integer matrix.

    Unimodular column operations only, so the selected-rows determinant of
    the result matches the original up to sign. Used to expose unit pivots
    for the unimodular minor search.
    """
    a = [list(row) for row in matrix]
    if not a:
        return []
    nrows, ncols = len(a), len(a[0])
    col = 0
    for row in range(nrows):
        if col >= ncols:
            break
        # euclid out the row entries to the right of col
        while True:
            nonzero = [c for c in range(col, ncols) if a[row][c]]
            if not nonzero:
                break
            cmin = min(nonzero, key=lambda c: abs(a[row][c]))
            if cmin != col:
                for r in range(nrows):
                    a[r][col], a[r][cmin] = a[r][cmin], a[r][col]
            done = True
            for c in range(col + 1, ncols):
                if a[row][c]:
                    q = a[row][c] // a[row][col]
                    for r in range(nrows):
                        a[r][c] -= q * a[r][col]
                    if a[row][c]:
                        done = False
            if done:
                break
        if a[row][col]:
            if a[row][col] < 0:
                for r in range(nrows):
                    a[r][col] = -a[r][col]
            col += 1
    return a
