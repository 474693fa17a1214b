"""Polyhedral cones ``{x : g(x) >= 0}`` and exact quadratic minimization on their slice
``{sum x = 1}`` by face enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from ..linalg import nullspace, rank, rref, solve
from .forms import LinearForm, QuadForm


@dataclass(frozen=True)
class Face:
    """An affine piece ``x = x0 + B y`` of the slice, cut out by the active constraints."""

    active: tuple
    x0: tuple
    basis: tuple  # columns

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class Candidate:
    point: tuple
    value: Fraction
    face: tuple


@dataclass(frozen=True)
class ConeRegion:
    """Nonnegative orthant in the named variables intersected with ``extra`` half-spaces
    ``g(x) >= 0``."""

    names: tuple
    extra: tuple = ()
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise ValueError("region needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "names", names)
        extra = tuple(g if isinstance(g, LinearForm) else LinearForm(g) for g in self.extra)
        for g in extra:
            if g.n != len(names):
                raise ValueError("constraint arity does not match the variables")
        object.__setattr__(self, "extra", extra)
        labels = tuple(self.labels) or tuple(f"{g.pretty(names)} >= 0" for g in extra)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def orthant(cls, names: Sequence[str]) -> "ConeRegion":
        return cls(tuple(names))

    def le(self, lhs: Sequence, rhs: Sequence, label: str | None = None) -> "ConeRegion":
        """Add ``lhs . x <= rhs . x``."""
        g = LinearForm(rhs) - LinearForm(lhs)
        lab = label or f"{LinearForm(lhs).pretty(self.names)} <= {LinearForm(rhs).pretty(self.names)}"
        return ConeRegion(self.names, self.extra + (g,), self.labels + (lab,))

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def rows(self) -> tuple:
        n = self.n
        unit = tuple(LinearForm([int(i == j) for j in range(n)]) for i in range(n))
        return unit + self.extra

    def contains(self, x: Sequence) -> bool:
        return all(g(x) >= 0 for g in self.rows)

    def index(self, name: str) -> int:
        return self.names.index(name)

    @cached_property
    def faces(self) -> tuple:
        """Every affine space obtained by making a linearly independent set of constraints
        active on the slice; vertices are the zero-dimensional ones."""
        n = self.n
        rows = [list(g.coeffs) for g in self.rows]
        ones = [Fraction(1)] * n
        seen = set()
        out = []

        def visit(active: tuple, start: int, r: int):
            A = [rows[i] for i in active] + [ones]
            status, x0 = solve(A, [Fraction(0)] * len(active) + [Fraction(1)])
            if status != "none":
                R, _ = rref([a + [b] for a, b in zip(A, [0] * len(active) + [1])])
                key = tuple(tuple(row) for row in R if any(v != 0 for v in row))
                if key not in seen:
                    seen.add(key)
                    B = nullspace(A)
                    out.append(Face(active, tuple(x0), tuple(tuple(c) for c in B)))
            if r >= n - 1:
                return
            for i in range(start, len(rows)):
                nxt = active + (i,)
                if rank([rows[j] for j in nxt] + [ones]) == r + 2:
                    visit(nxt, i + 1, r + 1)

        visit((), 0, 0)
        return tuple(out)

    @cached_property
    def vertices(self) -> tuple:
        pts = [f.x0 for f in self.faces if f.dim == 0 and self.contains(f.x0)]
        uniq = []
        for p in pts:
            if p not in uniq:
                uniq.append(p)
        if not uniq:
            raise ValueError("empty region")
        return tuple(uniq)

    def extreme_rays(self) -> tuple:
        """Primitive integer generators of the extreme rays."""
        out = []
        for v in self.vertices:
            den = 1
            for c in v:
                den = den * c.denominator // _gcd(den, c.denominator)
            ints = [int(c * den) for c in v]
            g = 0
            for c in ints:
                g = _gcd(g, abs(c))
            out.append(tuple(c // g for c in ints))
        return tuple(out)

    def describe(self) -> str:
        parts = [f"{v} >= 0" for v in self.names] + list(self.labels)
        return ", ".join(parts)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def stationary_candidates(Q: QuadForm, region: ConeRegion) -> list:
    """Exact critical points of ``Q`` on every face of the slice that lie in the region.

    A face contributes its unique stationary point when the restricted Hessian system has one.
    If the stationary set is larger, ``Q`` is constant along it, so the same value reappears on
    a lower-dimensional face; vertices always contribute.
    """
    out = []
    for f in region.faces:
        if f.dim == 0:
            x = f.x0
        else:
            H, h, _ = Q.restrict(f.x0, f.basis)
            status, y = solve(H, [-v for v in h])
            if status != "unique":
                continue
            x = tuple(f.x0[i] + sum((y[k] * f.basis[k][i] for k in range(f.dim)), Fraction(0))
                      for i in range(region.n))
        if region.contains(x):
            out.append(Candidate(tuple(x), Q(x), f.active))
    return out


def slice_minimum(Q: QuadForm, region: ConeRegion):
    """``(min, candidates)`` of ``Q`` over the slice; the minimum is exact."""
    cands = stationary_candidates(Q, region)
    if not cands:
        raise ValueError("empty region")
    return min(c.value for c in cands), cands
