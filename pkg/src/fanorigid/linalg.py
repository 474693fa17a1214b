"""Exact linear algebra over the rationals (Gauss-Jordan elimination on Fractions)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _matrix(A):
    return [[Fraction(x) for x in row] for row in A]


def rref(A: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form and the pivot columns."""
    R = _matrix(A)
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(A) -> int:
    return len(rref(A)[1]) if A else 0


def solve(A: Sequence[Sequence], b: Sequence):
    """The solution set of ``A x = b``: ``("unique", x)``, ``("none", None)`` or
    ``("many", particular)``."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return "none", None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return ("unique" if len(piv) == n else "many"), x


def nullspace(A: Sequence[Sequence], ncols: int | None = None) -> list:
    """Basis of the right null space."""
    if not A:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(A[0])
    R, piv = rref(A)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][fcol]
        basis.append(v)
    return basis


def matvec(A, x):
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A]


def dot(x, y):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))
