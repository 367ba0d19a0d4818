"""Exact Gaussian elimination over any field whose elements support + - * /.

Matrices are lists of rows. Entries may be ints, Fractions or cyclotomic
numbers; nothing here ever produces a float.
"""
from __future__ import annotations

from fractions import Fraction

from .scalars import div


class SingularMatrix(ValueError):
    pass


def _copy(mat):
    return [[x if not isinstance(x, int) else Fraction(x) for x in row] for row in mat]


def rref(mat):
    """Reduced row echelon form. Returns (rows, pivot_columns)."""
    rows = _copy(mat)
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        if p != 1:
            rows[r] = [div(x, p) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(mat) -> int:
    if not mat or not mat[0]:
        return 0
    return len(rref(mat)[1])


def nullspace(mat, ncols: int | None = None):
    """Basis of {x : mat x = 0}."""
    if not mat:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(mat[0])
    rows, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """The unique x with mat x = rhs; raises SingularMatrix otherwise."""
    n = len(mat[0]) if mat else 0
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rows, pivots = rref(aug)
    if n in pivots:
        raise SingularMatrix("inconsistent linear system")
    if len(pivots) < n:
        raise SingularMatrix("linear system has no unique solution")
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = rows[i][n]
    return x


def solve_any(mat, rhs):
    """Some x with mat x = rhs, or None when the system is inconsistent."""
    n = len(mat[0]) if mat else 0
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = rows[i][n]
    return x


def inverse(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in rows]


def transpose(mat):
    return [list(col) for col in zip(*mat)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def span_basis(vectors):
    """Row-reduced basis of the span of ``vectors`` (canonical for the subspace)."""
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    rows, pivots = rref(vectors)
    return rows[: len(pivots)]


def in_span(vectors, v) -> bool:
    if not vectors:
        return all(x == 0 for x in v)
    return rank(list(vectors) + [list(v)]) == rank(list(vectors))
