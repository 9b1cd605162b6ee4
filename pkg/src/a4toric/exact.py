"""Exact integer and rational linear algebra kernel.

Every computation in this package runs over arbitrary-precision integers
and `fractions.Fraction`; nothing here ever touches a float, so equality
tests downstream are exact and meaningful.

Matrices are plain sequences of equal-length rows. Functions return new
tuples or lists and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Rational = Fraction
Scalar = int | Fraction

__all__ = [
    "Rational",
    "DimensionError",
    "gcd_content",
    "primitive_vector",
    "int_det",
    "rank",
    "rref",
    "kernel_line",
    "SolveResult",
    "solve_exact",
    "unimodular_inverse",
]


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


def gcd_content(vec: Sequence[int]) -> int:
    """Greatest common divisor of the absolute values; 0 for a zero vector."""
    g = 0
    for x in vec:
        g = gcd(g, x)
    return g


def primitive_vector(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by its content; rejects the zero vector."""
    g = gcd_content(vec)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in vec)


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix.

    Fraction-free Bareiss elimination: every intermediate quotient is an
    exact integer division, so the result is exact for any size.
    """
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise DimensionError("int_det requires a square matrix")
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns the reduced matrix and the list of pivot columns.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    for row in mat:
        if len(row) != ncols:
            raise DimensionError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank of a rational matrix."""
    return len(rref(rows)[1])


def kernel_line(rows: Sequence[Sequence[Scalar]], ncols: int) -> tuple[int, ...] | None:
    """Primitive integer spanning vector of a one-dimensional kernel.

    Returns None unless the kernel of the matrix (acting on column
    vectors of length `ncols`) has dimension exactly one.
    """
    if not rows:
        mat, pivots = [], []
    else:
        mat, pivots = rref(rows)
    if ncols - len(pivots) != 1:
        return None
    free = next(c for c in range(ncols) if c not in pivots)
    vec = [Fraction(0)] * ncols
    vec[free] = Fraction(1)
    for r, c in enumerate(pivots):
        vec[c] = -mat[r][free]
    mult = lcm(*(x.denominator for x in vec))
    ints = [int(x * mult) for x in vec]
    return primitive_vector(ints)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of an exact linear solve.

    `solution` sets every free column to zero; it is None when the system
    is inconsistent. `determined` lists the columns whose value does not
    depend on the choice of free columns. `inconsistent_row` is the index
    of an input row that reduces to 0 = nonzero.
    """

    solution: tuple[Fraction, ...] | None
    pivot_cols: tuple[int, ...]
    free_cols: tuple[int, ...]
    consistent: bool
    inconsistent_row: int | None
    determined: frozenset[int]

    @property
    def unique(self) -> bool:
        return self.consistent and not self.free_cols


def solve_exact(matrix: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> SolveResult:
    """Solve `matrix * x = rhs` exactly by Gauss-Jordan elimination.

    Full diagnostics: pivot and free columns, which unknowns are uniquely
    determined, and on inconsistency the original index of a row whose
    reduction yields a contradiction.
    """
    m = len(matrix)
    if len(rhs) != m:
        raise DimensionError("matrix and right-hand side disagree in row count")
    ncols = len(matrix[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for row in matrix:
        if len(row) != ncols:
            raise DimensionError("ragged matrix")
    labels = list(range(m))
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        labels[r], labels[pivot] = labels[pivot], labels[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    pivot_cols = tuple(c for _, c in pivots)
    free_cols = tuple(c for c in range(ncols) if c not in pivot_cols)
    for i in range(r, m):
        if aug[i][ncols] != 0:
            return SolveResult(None, pivot_cols, free_cols, False, labels[i], frozenset())
    solution = [Fraction(0)] * ncols
    determined = set()
    for row, c in pivots:
        solution[c] = aug[row][ncols]
        if all(aug[row][f] == 0 for f in free_cols):
            determined.add(c)
    return SolveResult(tuple(solution), pivot_cols, free_cols, True, None, frozenset(determined))


def unimodular_inverse(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact integer inverse of a square integer matrix with determinant +-1."""
    n = len(rows)
    det = int_det(rows)
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular (determinant {det})")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    inv = [[red[i][n + j] for j in range(n)] for i in range(n)]
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("inverse is not integral")
        out.append([int(x) for x in row])
    return out
