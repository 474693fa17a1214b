"""Divisor classes ``aH - bE`` on the blow-up of a point, the involution attached to a
point of multiplicity ``M - 2``, and the degree and multiplicity functionals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class DivisorClass:
    a: int
    b: int
    M: int
    mu: int

    def __post_init__(self):
        for name in ("a", "b", "M", "mu"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")

    def _same(self, other: "DivisorClass"):
        if (self.M, self.mu) != (other.M, other.mu):
            raise ValueError("classes live on different blow-ups")

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same(other)
        return DivisorClass(self.a + other.a, self.b + other.b, self.M, self.mu)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same(other)
        return DivisorClass(self.a - other.a, self.b - other.b, self.M, self.mu)

    def __neg__(self):
        return DivisorClass(-self.a, -self.b, self.M, self.mu)

    def __mul__(self, k: int) -> "DivisorClass":
        return DivisorClass(k * self.a, k * self.b, self.M, self.mu)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.a}H - {self.b}E"


def H(M: int, mu: int | None = None) -> DivisorClass:
    return DivisorClass(1, 0, M, M - 2 if mu is None else mu)


def E(M: int, mu: int | None = None) -> DivisorClass:
    return DivisorClass(0, 1, M, M - 2 if mu is None else mu)


def T_class(M: int) -> DivisorClass:
    """The class ``(M-2)H - (M-1)E`` exactly as stated for the divisor cut by the tangent cone."""
    return DivisorClass(M - 2, M - 1, M, M - 2)


def tau_matrix(M: int) -> tuple:
    """Matrix of the involution on ``(a, b)`` coordinates of ``aH - bE``.

    ``tau*H = (M-1)H - M E`` and ``tau*E = mu H - (mu+1) E`` with ``mu = M - 2``; on
    the pair (a, b) this gives ``a' = a(M-1) - b mu``, ``b' = a M - b(mu+1)``.
    """
    mu = M - 2
    return ((M - 1, -mu), (M, -(mu + 1)))


def tau_action(c: DivisorClass) -> DivisorClass:
    if c.mu != c.M - 2:
        raise ValueError("involution defined only at maximal multiplicity")
    (r00, r01), (r10, r11) = tau_matrix(c.M)
    return DivisorClass(r00 * c.a + r01 * c.b, r10 * c.a + r11 * c.b, c.M, c.mu)


def degree_functional(c: DivisorClass) -> int:
    return c.a * c.M


def mult_functional(c: DivisorClass) -> int:
    return c.b * c.mu


def maximality_bound(M: int) -> Fraction:
    """Bound on ``nu_0 / n`` from pairing ``nH - nu_0 E`` against the class T."""
    T = T_class(M)
    return Fraction(degree_functional(T), mult_functional(T))


@dataclass(frozen=True)
class UntwistResult:
    n: int
    nu0: int
    new_n: int
    new_nu: int
    maximal_removed: bool
    inequality_holds: bool


def untwist_check(n: int, nu0: int, M: int) -> UntwistResult:
    if M < 4:
        raise ValueError("need M >= 4")
    if nu0 <= n:
        raise ValueError("point not maximal; untwisting not needed")
    mu = M - 2
    image = tau_action(DivisorClass(n, nu0, M, mu))
    # nM - nu0(mu+1) <= n(M-1) - nu0 mu
    holds = image.b <= image.a
    return UntwistResult(n, nu0, image.a, image.b, image.b <= image.a, holds)
