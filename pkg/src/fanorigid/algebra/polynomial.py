"""Sparse multivariate polynomials with exact coefficients."""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .fields import QQ, PrimeField, RationalField

Exponent = tuple


def grevlex_key(e: Exponent):
    """Sort key realising graded reverse lexicographic order (larger key = larger monomial)."""
    return (sum(e), tuple(-x for x in reversed(e)))


def divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_div(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def mono_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial in ``nvars`` variables over ``field``.

    ``terms`` maps exponent tuples to nonzero field elements.
    """

    __slots__ = ("nvars", "field", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None, field=QQ):
        self.nvars = int(nvars)
        self.field = field
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != self.nvars:
                    raise ValueError(f"exponent {e} has length {len(e)}, expected {self.nvars}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                c = field(c)
                if c != 0:
                    clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict, field) -> "Polynomial":
        # Trusted constructor: terms already normalized and zero-free.
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zero(cls, nvars: int, field=QQ) -> "Polynomial":
        return cls._raw(nvars, {}, field)

    @classmethod
    def constant(cls, nvars: int, c, field=QQ) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c}, field)

    @classmethod
    def variable(cls, nvars: int, i: int, field=QQ) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): field.one}, field)

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1, field=QQ) -> "Polynomial":
        return cls(len(exps), {tuple(exps): c}, field)

    @classmethod
    def gens(cls, nvars: int, field=QQ) -> list["Polynomial"]:
        return [cls.variable(nvars, i, field) for i in range(nvars)]

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for the zero polynomial."""
        return min((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def graded_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d}, self.field)

    def graded_parts(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = defaultdict(dict)
        for e, c in self.terms.items():
            parts[sum(e)][e] = c
        return {d: Polynomial._raw(self.nvars, t, self.field) for d, t in sorted(parts.items())}

    def leading_exponent(self) -> Exponent:
        return max(self.terms, key=grevlex_key)

    def leading_term(self):
        e = self.leading_exponent()
        return e, self.terms[e]

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def coefficient(self, e: Exponent):
        return self.terms.get(tuple(e), self.field.zero)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    # arithmetic

    def _check(self, other: "Polynomial"):
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, F.zero), c)
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial._raw(self.nvars, out, F)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Polynomial._raw(self.nvars, {e: F.neg(c) for e, c in self.terms.items()}, F)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "Polynomial":
        F = self.field
        c = F(c)
        if c == 0:
            return Polynomial.zero(self.nvars, F)
        return Polynomial._raw(self.nvars, {e: F.mul(v, c) for e, v in self.terms.items()}, F)

    def mul_term(self, e: Exponent, c) -> "Polynomial":
        F = self.field
        if c == 0:
            return Polynomial.zero(self.nvars, F)
        return Polynomial._raw(
            self.nvars, {mono_mul(k, e): F.mul(v, c) for k, v in self.terms.items()}, F
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        F = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = F.add(out.get(e, F.zero), F.mul(c1, c2))
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return Polynomial._raw(self.nvars, out, F)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term()
        return self.scale(self.field.inv(c))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.nvars, other, self.field)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.field, frozenset(self.terms.items())))
        return self._hash

    # calculus and substitution

    def derivative(self, i: int) -> "Polynomial":
        F = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(c, F(e[i]))
                if v != 0:
                    k = list(e)
                    k[i] -= 1
                    out[tuple(k)] = v
        return Polynomial._raw(self.nvars, out, F)

    def gradient(self) -> list["Polynomial"]:
        return [self.derivative(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence):
        F = self.field
        pt = [F(x) for x in point]
        if len(pt) != self.nvars:
            raise ValueError("point has wrong length")
        total = F.zero
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = F.mul(v, _fpow(F, x, k))
            total = F.add(total, v)
        return total

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i``; images share a common ring."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0] if images else None
        n = target.nvars
        F = self.field
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        out = Polynomial.zero(n, F)
        for e, c in self.terms.items():
            term = Polynomial.constant(n, c, F)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def homogenize(self, position: int = 0) -> "Polynomial":
        """Homogenize with a new variable inserted at ``position``."""
        d = self.degree()
        out = {}
        for e, c in self.terms.items():
            k = list(e)
            k.insert(position, d - sum(e))
            out[tuple(k)] = c
        return Polynomial._raw(self.nvars + 1, out, self.field)

    def change_field(self, field) -> "Polynomial":
        return Polynomial(self.nvars, dict(self.terms), field)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"z{i + 1}" if k == 1 else f"z{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def _fpow(F, x, k):
    if isinstance(F, PrimeField):
        return pow(x, k, F.p)
    return x ** k


def graded_part(f: Polynomial, d: int) -> Polynomial:
    """Sum of the terms of ``f`` of total degree exactly ``d``."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return f.graded_part(d)


def chart_index(x: Sequence) -> int:
    for i, v in enumerate(x):
        if v != 0:
            return i
    raise ValueError("point has no nonzero coordinate")


def recenter(F: Polynomial, x: Sequence) -> Polynomial:
    """Dehomogenize ``F`` in the chart of the first nonzero coordinate of ``x`` and
    translate ``x`` to the origin.

    The result lives in ``F.nvars - 1`` variables ordered as the remaining projective
    coordinates; its degree-``d`` graded part is the ``q_d`` of the local equation.
    """
    if not F.is_homogeneous():
        raise ValueError("F must be homogeneous")
    field = F.field
    x = [field(v) for v in x]
    if len(x) != F.nvars:
        raise ValueError("point dimension does not match")
    c = chart_index(x)
    inv = field.inv(x[c])
    x = [field.mul(v, inv) for v in x]
    if F.evaluate(x) != 0:
        raise ValueError("point not on hypersurface")
    n = F.nvars - 1
    images = []
    k = 0
    for j in range(F.nvars):
        if j == c:
            images.append(Polynomial.constant(n, 1, field))
        else:
            images.append(Polynomial.variable(n, k, field) + Polynomial.constant(n, x[j], field))
            k += 1
    return F.compose(images)


def random_homogeneous(nvars: int, degree: int, field, rng, density: float = 1.0) -> Polynomial:
    """Homogeneous form with uniformly random coefficients on all (or a fraction of) monomials."""
    terms = {}
    for e in monomials_of_degree(nvars, degree):
        if density >= 1.0 or rng.random() < density:
            terms[e] = field.random(rng)
    return Polynomial(nvars, terms, field)


def monomials_of_degree(nvars: int, degree: int) -> Iterable[Exponent]:
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


def univariate_coefficients(f: Polynomial, var: int, point: Sequence) -> list:
    """Coefficients (constant first) of ``f`` restricted to the line where every variable
    except ``var`` is fixed to the corresponding entry of ``point``."""
    F = f.field
    coeffs: dict[int, object] = defaultdict(lambda: F.zero)
    for e, c in f.terms.items():
        v = c
        for i, k in enumerate(e):
            if i != var and k:
                v = F.mul(v, _fpow(F, F(point[i]), k))
        coeffs[e[var]] = F.add(coeffs[e[var]], v)
    deg = max(coeffs, default=0)
    return [coeffs[i] for i in range(deg + 1)]


__all__ = [
    "Polynomial",
    "graded_part",
    "recenter",
    "grevlex_key",
    "divides",
    "mono_lcm",
    "mono_div",
    "mono_mul",
    "random_homogeneous",
    "monomials_of_degree",
    "univariate_coefficients",
    "RationalField",
]
