"""Exact linear and quadratic forms over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _fr(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point coefficient")
    return Fraction(x)


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(_fr(c) for c in coeffs))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: Sequence) -> Fraction:
        return sum((c * _fr(v) for c, v in zip(self.coeffs, x)), Fraction(0))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __mul__(self, k) -> "LinearForm":
        k = _fr(k)
        return LinearForm(k * a for a in self.coeffs)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def pretty(self, names: Sequence[str]) -> str:
        return _pretty_linear(self.coeffs, names)


def _pretty_linear(coeffs, names) -> str:
    parts = []
    for c, v in zip(coeffs, names):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        term = v if a == 1 else f"{a}*{v}"
        parts.append((sign, term))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        s += f" {sign} {term}"
    return s


@dataclass(frozen=True)
class QuadForm:
    """``x^T A x`` with ``A`` symmetric."""

    matrix: tuple

    def __init__(self, matrix):
        rows = tuple(tuple(_fr(v) for v in row) for row in matrix)
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("matrix must be square")
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix must be symmetric")
        object.__setattr__(self, "matrix", rows)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def zero(cls, n: int) -> "QuadForm":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def from_triples(cls, n: int, triples: Iterable) -> "QuadForm":
        """Coefficient triples ``(i, j, c)`` meaning ``c x_i x_j``."""
        A = [[Fraction(0)] * n for _ in range(n)]
        for i, j, c in triples:
            c = _fr(c)
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"index ({i}, {j}) out of range")
            if i == j:
                A[i][i] += c
            else:
                A[i][j] += c / 2
                A[j][i] += c / 2
        return cls(A)

    @classmethod
    def product(cls, l1: LinearForm, l2: LinearForm) -> "QuadForm":
        n = l1.n
        a, b = l1.coeffs, l2.coeffs
        return cls([[(a[i] * b[j] + a[j] * b[i]) / 2 for j in range(n)] for i in range(n)])

    @classmethod
    def square(cls, l: LinearForm) -> "QuadForm":
        return cls.product(l, l)

    def __call__(self, x: Sequence) -> Fraction:
        x = [_fr(v) for v in x]
        A = self.matrix
        return sum((x[i] * sum((A[i][j] * x[j] for j in range(self.n)), Fraction(0)) for i in range(self.n)),
                   Fraction(0))

    def __add__(self, other: "QuadForm") -> "QuadForm":
        return QuadForm([[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __sub__(self, other: "QuadForm") -> "QuadForm":
        return QuadForm([[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __mul__(self, k) -> "QuadForm":
        k = _fr(k)
        return QuadForm([[k * a for a in r] for r in self.matrix])

    __rmul__ = __mul__

    def triples(self) -> list:
        """Canonical ``(i, j, c)`` with ``i <= j`` and ``c`` the coefficient of ``x_i x_j``."""
        out = []
        for i in range(self.n):
            for j in range(i, self.n):
                c = self.matrix[i][i] if i == j else 2 * self.matrix[i][j]
                if c != 0:
                    out.append((i, j, c))
        return out

    def restrict(self, x0: Sequence, B: Sequence[Sequence]):
        """Pull back along ``x = x0 + B y`` (``B`` given as a list of columns):
        returns ``(H, h, c)`` with ``Q = y^T H y + 2 h^T y + c``."""
        A = self.matrix
        n = self.n
        x0 = [_fr(v) for v in x0]
        Ax0 = [sum((A[i][j] * x0[j] for j in range(n)), Fraction(0)) for i in range(n)]
        AB = [[sum((A[i][j] * col[j] for j in range(n)), Fraction(0)) for i in range(n)] for col in B]
        k = len(B)
        H = [[sum((B[a][i] * AB[b][i] for i in range(n)), Fraction(0)) for b in range(k)] for a in range(k)]
        h = [sum((B[a][i] * Ax0[i] for i in range(n)), Fraction(0)) for a in range(k)]
        c = sum((x0[i] * Ax0[i] for i in range(n)), Fraction(0))
        return H, h, c

    def pretty(self, names: Sequence[str]) -> str:
        parts = []
        for i, j, c in self.triples():
            mono = f"{names[i]}^2" if i == j else f"{names[i]}*{names[j]}"
            parts.append((c, mono))
        if not parts:
            return "0"
        s = ""
        for k, (c, mono) in enumerate(parts):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            term = mono if a == 1 else f"{a}*{mono}"
            s += (("-" if sign == "-" else "") + term) if k == 0 else f" {sign} {term}"
        return s


def ldl(A: Sequence[Sequence]):
    """Exact ``A = L diag(d) L^T`` for a symmetric rational matrix without pivoting.

    Returns ``(L, d)`` or ``None`` when ``A`` is not positive semidefinite
    (a negative pivot, or a zero pivot with a nonzero remaining column).
    """
    n = len(A)
    M = [[_fr(v) for v in row] for row in A]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    for k in range(n):
        piv = M[k][k]
        if piv < 0:
            return None
        if piv == 0:
            if any(M[i][k] != 0 for i in range(k + 1, n)):
                return None
            continue
        d[k] = piv
        for i in range(k + 1, n):
            L[i][k] = M[i][k] / piv
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] -= L[i][k] * piv * L[j][k]
    return L, d


@dataclass(frozen=True)
class SOSIdentity:
    """``Q(x) = sum_k w_k (l_k . x)^2 + sum c_ab g_a(x) g_b(x)`` with all ``w_k, c_ab >= 0``
    and ``g`` linear forms nonnegative on the region."""

    squares: tuple  # (weight, LinearForm)
    products: tuple = ()  # (coeff, LinearForm, LinearForm)

    def expand(self, n: int) -> QuadForm:
        out = QuadForm.zero(n)
        for w, l in self.squares:
            out = out + QuadForm.square(l) * w
        for c, g1, g2 in self.products:
            out = out + QuadForm.product(g1, g2) * c
        return out

    def pretty(self, names) -> str:
        parts = []
        for w, l in self.squares:
            inner = l.pretty(names)
            parts.append(f"({inner})^2" if w == 1 else f"{w}*({inner})^2")
        for c, g1, g2 in self.products:
            parts.append(f"{c}*({g1.pretty(names)})*({g2.pretty(names)})")
        return " + ".join(parts) if parts else "0"
