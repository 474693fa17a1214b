"""Hypersurface germs at a point: multiplicity, tangent cone, the regularity
conditions on the graded parts, hypertangent systems and the special cycles R, T.

A germ is stored through its graded parts ``q_mu, ..., q_M``, each a form in the
``M`` affine coordinates centred at the point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import (
    GF,
    Ideal,
    Polynomial,
    PrimeField,
    dimension,
    groebner,
    ideal_dimension,
    parse_polynomial,
    random_homogeneous,
    recenter,
    regular_sequence_witness,
)
from .algebra.polynomial import univariate_coefficients
from .algebra.textio import ParseError, format_polynomial

GENERICITY_RETRIES = 5
_BRUTE_FORCE_PRIME_LIMIT = 1 << 22


@dataclass(frozen=True)
class HypersurfaceGerm:
    M: int
    parts: tuple  # (degree, form) pairs, increasing degree, forms possibly zero
    field: object

    @classmethod
    def from_parts(cls, M: int, parts, field=None) -> "HypersurfaceGerm":
        """``parts`` maps degree to form, or is a sequence of forms of consecutive degree
        starting at the first one's degree."""
        if not isinstance(parts, dict):
            parts = list(parts)
            if not parts:
                raise ValueError("no graded parts given")
            start = next((p.degree() for p in parts if not p.is_zero()), 1)
            parts = {start + k: p for k, p in enumerate(parts)}
        if field is None:
            field = next(iter(parts.values())).field
        out = {}
        for d, q in parts.items():
            if q.nvars != M:
                raise ValueError(f"graded part of degree {d} has {q.nvars} variables, expected {M}")
            if d < 1 or d > M:
                raise ValueError(f"degree {d} outside [1, M]")
            if not q.is_zero() and not (q.is_homogeneous() and q.degree() == d):
                raise ValueError(f"graded part of degree {d} is not a form of that degree")
            if q.field != field:
                raise ValueError("graded parts over different fields")
            out[d] = q
        return cls(M, tuple(sorted(out.items())), field)

    @classmethod
    def from_equation(cls, f: Polynomial) -> "HypersurfaceGerm":
        """Germ of ``{f = 0}`` at the origin of an affine chart of P^M (M = f.nvars)."""
        if f.constant_term() != 0:
            raise ValueError("equation does not vanish at the origin")
        M = f.nvars
        if f.degree() > M:
            raise ValueError("degree exceeds the ambient dimension")
        return cls.from_parts(M, dict(f.graded_parts()), f.field)

    @classmethod
    def from_projective(cls, F: Polynomial, x: Sequence) -> "HypersurfaceGerm":
        return cls.from_equation(recenter(F, x))

    def q(self, d: int) -> Polynomial:
        for k, p in self.parts:
            if k == d:
                return p
        return Polynomial.zero(self.M, self.field)

    @property
    def mu(self) -> int:
        return multiplicity(self)

    @property
    def equation(self) -> Polynomial:
        f = Polynomial.zero(self.M, self.field)
        for _, p in self.parts:
            f = f + p
        return f

    def segment(self, i: int) -> Polynomial:
        """Left segment ``f_i = q_mu + ... + q_i``."""
        f = Polynomial.zero(self.M, self.field)
        for k, p in self.parts:
            if k <= i:
                f = f + p
        return f

    def over(self, field) -> "HypersurfaceGerm":
        if field == self.field:
            return self
        return HypersurfaceGerm(self.M, tuple((d, p.change_field(field)) for d, p in self.parts), field)


def multiplicity(g: HypersurfaceGerm) -> int:
    for d, p in g.parts:
        if not p.is_zero():
            return d
    raise ValueError("zero germ")


def tangent_cone(g: HypersurfaceGerm) -> Polynomial:
    return g.q(multiplicity(g))


# regularity --------------------------------------------------------------------


@dataclass
class ConditionResult:
    verdict: str  # "pass" | "fail" | "n/a" | "skipped"
    witness: object = None
    detail: dict = dc_field(default_factory=dict)

    def ok(self) -> bool:
        return self.verdict != "fail"


@dataclass
class RegularityReport:
    M: int
    mu: int
    prime: int | None
    conditions: dict  # name -> ConditionResult
    notes: list = dc_field(default_factory=list)

    def passed(self) -> bool:
        return all(c.ok() for c in self.conditions.values())

    def verdicts(self) -> dict:
        return {k: c.verdict for k, c in self.conditions.items()}


def _modp(g: HypersurfaceGerm, prime: int | None):
    if isinstance(g.field, PrimeField) and (prime is None or prime == g.field.p):
        return g
    return g.over(GF(prime))


def cone_points(q: Polynomial, count: int, rng: random.Random, max_tries: int = 2000) -> list:
    """Random points of the projective hypersurface ``{q = 0}`` over a prime field.

    A random point is fixed in all coordinates but the last; the remaining univariate
    equation is solved by exhaustive evaluation over the field.
    """
    F = q.field
    if not isinstance(F, PrimeField):
        raise ValueError("point sampling needs a prime field")
    if F.p > _BRUTE_FORCE_PRIME_LIMIT:
        raise ValueError(f"point sampling supports primes below {_BRUTE_FORCE_PRIME_LIMIT}")
    p = F.p
    N = q.nvars
    ts = np.arange(p, dtype=np.int64)
    points = []
    for _ in range(max_tries):
        if len(points) >= count:
            break
        base = [rng.randrange(p) for _ in range(N - 1)] + [0]
        coeffs = univariate_coefficients(q, N - 1, base)
        if all(c == 0 for c in coeffs):
            continue
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(coeffs):
            acc = (acc * ts + c) % p
        roots = np.flatnonzero(acc == 0)
        if roots.size == 0:
            continue
        t = int(roots[rng.randrange(roots.size)])
        y = base[:-1] + [t]
        if any(y):
            points.append(tuple(y))
    if len(points) < count:
        raise RuntimeError("could not sample enough points on the cone")
    return points


def tangent_data(q: Polynomial, y: Sequence):
    """Tangent hyperplane ``l_y`` and Hessian quadric ``Q_y`` of the form ``q`` at ``y``."""
    N = q.nvars
    F = q.field
    zs = Polynomial.gens(N, F)
    grad = q.gradient()
    l = Polynomial.zero(N, F)
    for i in range(N):
        l = l + zs[i].scale(grad[i].evaluate(y))
    Q = Polynomial.zero(N, F)
    for i in range(N):
        for j in range(N):
            h = grad[i].derivative(j).evaluate(y)
            if h:
                Q = Q + (zs[i] * zs[j]).scale(h)
    return l, Q


def local_parts(q: Polynomial, y: Sequence) -> list:
    """Graded parts ``xi_1, ..., xi_deg`` of the form ``q`` recentred at the projective point ``y``."""
    h = recenter(q, y)
    return [h.graded_part(d) for d in range(1, q.degree() + 1)]


def condition_iii_applicable(mu: int, M: int) -> bool:
    return (mu == 3 and M >= 6) or (mu == 4 and M >= 7)


def condition_iii_top(mu: int, M: int) -> int:
    return 5 if (mu == 3 and M == 6) else 6


def condition_iii_ideal(g: HypersurfaceGerm, y: Sequence) -> list:
    """Generators ``q_mu, l_y, Q_y, q_{mu+1}, ..., q_top`` whose zero set must have
    the expected projective codimension (one per generator)."""
    mu = multiplicity(g)
    qmu = g.q(mu)
    l, Q = tangent_data(qmu, y)
    top = condition_iii_top(mu, g.M)
    return [qmu, l, Q] + [g.q(d) for d in range(mu + 1, top + 1)]


def check_regularity(g: HypersurfaceGerm, sample_count: int = 8, seed: int = 0,
                     prime: int | None = None) -> RegularityReport:
    mu = multiplicity(g)
    M = g.M
    if not 2 <= mu <= M - 2:
        raise ValueError("not a supported singular germ")
    reduced = not isinstance(g.field, PrimeField)
    g = _modp(g, prime)
    p = g.field.p
    rng = random.Random(seed)
    notes = []
    if reduced:
        notes.append(f"rational germ reduced modulo {p}")
    if mu == 2:
        notes.append("multiplicity 2 points are excluded by a separate argument; checked for bookkeeping only")
    conds = {}

    # (i) graded parts form a regular sequence
    seq = [g.q(d) for d in range(mu, M + 1)]
    failing, dims = regular_sequence_witness(seq, M)
    if failing is None:
        conds["i"] = ConditionResult("pass", detail={"dims": dims})
    else:
        conds["i"] = ConditionResult("fail", witness={"prefix": failing}, detail={"dims": dims})

    # (ii) smooth cone, regular at sampled points
    qmu = g.q(mu)
    jac = [qmu] + [d for d in qmu.gradient() if not d.is_zero()]
    sing_dim = dimension(jac, M)
    if sing_dim > 0:
        conds["ii"] = ConditionResult("fail", witness={"singular_locus_affine_dim": sing_dim})
    elif sample_count <= 0:
        conds["ii"] = ConditionResult("skipped", detail={"smooth": True})
    else:
        points = cone_points(qmu, sample_count, rng)
        k = min(mu, M - 2)
        bad = None
        for y in points:
            xi = local_parts(qmu, y)[:k]
            w, dims_y = regular_sequence_witness(xi, M - 1)
            if w is not None:
                bad = {"point": list(y), "prefix": w, "dims": dims_y}
                break
        if bad is None:
            conds["ii"] = ConditionResult("pass", detail={"smooth": True, "points": [list(y) for y in points]})
        else:
            conds["ii"] = ConditionResult("fail", witness=bad)

    # (iii) codimension of the tangent-quadric section
    if not condition_iii_applicable(mu, M):
        conds["iii"] = ConditionResult("n/a", detail={"reason": f"mu={mu}, M={M}"})
        if mu == 4 and M == 6:
            notes.append("condition (iii) is unspecified for mu=4, M=6")
    elif sample_count <= 0:
        conds["iii"] = ConditionResult("skipped")
    else:
        points = conds["ii"].detail.get("points") if conds["ii"].verdict == "pass" else None
        if points is None:
            points = [list(y) for y in cone_points(qmu, sample_count, rng)]
        bad = None
        for y in points:
            gens = condition_iii_ideal(g, y)
            expected = M - len(gens)
            got = dimension(gens, M)
            if got != expected:
                bad = {"point": list(y), "affine_dim": got, "expected": expected}
                break
        if bad is None:
            conds["iii"] = ConditionResult("pass", detail={"codim": len(condition_iii_ideal(g, points[0]))})
        else:
            conds["iii"] = ConditionResult("fail", witness=bad)
    return RegularityReport(M, mu, p, conds, notes)


def check_smooth_regularity(g: HypersurfaceGerm, prime: int | None = None) -> RegularityReport:
    """Regularity at a smooth point: ``q_1, ..., q_k`` regular with ``k = min(deg, M - 1)``."""
    if multiplicity(g) != 1:
        raise ValueError("germ is singular")
    g = _modp(g, prime)
    m = max(d for d, p in g.parts if not p.is_zero())
    k = min(m, g.M - 1)
    failing, dims = regular_sequence_witness([g.q(d) for d in range(1, k + 1)], g.M)
    res = ConditionResult("pass" if failing is None else "fail",
                          witness=None if failing is None else {"prefix": failing},
                          detail={"dims": dims})
    return RegularityReport(g.M, 1, g.field.p, {"smooth": res})


# hypertangent systems ------------------------------------------------------------


@dataclass(frozen=True)
class HypertangentSystem:
    i: int
    germ: HypersurfaceGerm
    coefficients: dict  # k -> s_k, a form of degree k; s_0 a nonzero constant
    member: Polynomial
    attempts: int = 1

    def restricted_order(self) -> int:
        """Order at the origin of the member minus ``(sum of s_k) * f``, a representative
        of the same divisor on V; at least ``i + 1``."""
        S = Polynomial.zero(self.germ.M, self.germ.field)
        for s in self.coefficients.values():
            S = S + s
        return (self.member - S * self.germ.equation).order()


def _check_index(g: HypersurfaceGerm, i: int):
    mu = multiplicity(g)
    if not mu <= i <= g.M - 1:
        raise ValueError(f"index {i} outside [{mu}, {g.M - 1}]")
    return mu


def hypertangent_system(g: HypersurfaceGerm, i: int, seed: int = 0) -> HypertangentSystem:
    mu = _check_index(g, i)
    rng = random.Random(seed)
    F = g.field
    f = g.equation
    for attempt in range(1, GENERICITY_RETRIES + 1):
        coeffs = {0: Polynomial.constant(g.M, _nonzero(F, rng), F)}
        for k in range(1, i - mu + 1):
            coeffs[k] = random_homogeneous(g.M, k, F, rng)
        member = Polynomial.zero(g.M, F)
        for j in range(mu, i + 1):
            member = member + g.segment(j) * coeffs[i - j]
        # a draw whose divisor contains V is degenerate
        if member.is_zero() or groebner([f]).contains(member):
            continue
        return HypertangentSystem(i, g, coeffs, member, attempt)
    raise RuntimeError("no generic member found")


def _nonzero(F, rng):
    while True:
        c = F.random(rng)
        if c != 0:
            return c


def base_locus_codim(g: HypersurfaceGerm, i: int, prime: int | None = None) -> int:
    """Codimension in V of ``{q_mu = ... = q_i = 0} ∩ V``."""
    mu = _check_index(g, i)
    g = _modp(g, prime)
    tail = Polynomial.zero(g.M, g.field)
    for d, p in g.parts:
        if d > i:
            tail = tail + p
    gens = [g.q(d) for d in range(mu, i + 1)] + ([tail] if not tail.is_zero() else [])
    return (g.M - 1) - dimension(gens, g.M)


def hypertangent_ratio(i: int, mu: int, M: int) -> Fraction:
    if not mu <= i <= M - 1:
        raise ValueError(f"index {i} outside [{mu}, {M - 1}]")
    return Fraction((i + 1) * mu, i * M)


def chain_factor(indices: Sequence[int], mu: int, M: int, mu_over_M_power: int = 0) -> Fraction:
    """Product of ``(i + 1) / i`` over distinct indices in ``[mu, M - 1]``, times ``(mu/M)^power``."""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate index")
    out = Fraction(mu, M) ** mu_over_M_power
    for i in indices:
        if not mu <= i <= M - 1:
            raise ValueError(f"index {i} outside [{mu}, {M - 1}]")
        out *= Fraction(i + 1, i)
    return out


def special_cycle_R_stats(mu: int, M: int):
    if not 2 <= mu <= M - 2:
        raise ValueError("need 2 <= mu <= M - 2")
    return Fraction(mu + 2, M), 1


@dataclass(frozen=True)
class CycleTCheck:
    degree: int
    mult: int
    point: tuple


def cycle_T_stats(mu: int, cone: Polynomial | None = None, y: Sequence | None = None, seed: int = 0):
    """``(deg T, mult_y T) = (2 mu, 6)``.

    With an explicit cone equation, the values are also verified at ``y`` (sampled if
    omitted): ``(q, l_y, Q_y)`` must be a complete intersection, giving degree
    ``mu * 1 * 2``, and ``(xi_1, xi_2, xi_3)`` must be regular, giving a tangent cone of
    degree ``1 * 2 * 3``.
    """
    if mu < 3:
        raise ValueError("need mu >= 3")
    if cone is None:
        return 2 * mu, 6
    if cone.degree() != mu or not cone.is_homogeneous():
        raise ValueError("cone equation must be a form of degree mu")
    if y is None:
        y = cone_points(cone, 1, random.Random(seed))[0]
    N = cone.nvars
    l, Q = tangent_data(cone, y)
    if dimension([cone, l, Q], N) != N - 3:
        raise ValueError("T is not a complete intersection at this cone")
    xi = local_parts(cone, y)
    if xi[0].is_zero():
        raise ValueError("sampled point is singular on the cone")
    w, _ = regular_sequence_witness(xi[:3], N - 1)
    if w is not None:
        raise ValueError("tangent cone of T at y is not the expected complete intersection")
    deg = cone.degree() * l.degree() * Q.degree()
    mult = xi[0].degree() * xi[1].degree() * xi[2].degree()
    return CycleTCheck(deg, mult, tuple(y))


# random and engineered germs -------------------------------------------------------


def random_germ(M: int, mu: int, seed: int = 0, field=None) -> HypersurfaceGerm:
    if M < 5:
        raise ValueError("need M >= 5")
    if not 2 <= mu <= M - 2:
        raise ValueError("need 2 <= mu <= M - 2")
    field = GF() if field is None else field
    rng = random.Random(seed)
    parts = {d: random_homogeneous(M, d, field, rng) for d in range(mu, M + 1)}
    return HypersurfaceGerm.from_parts(M, parts, field)


def engineered_irregular_germ(M: int, mu: int, seed: int = 0, field=None) -> HypersurfaceGerm:
    """Random germ with ``q_{mu+1} = z_1 q_mu``, so the second prefix of the graded
    sequence does not cut the codimension down."""
    g = random_germ(M, mu, seed, field)
    z1 = Polynomial.variable(M, 0, g.field)
    parts = dict(g.parts)
    parts[mu + 1] = z1 * parts[mu]
    return HypersurfaceGerm.from_parts(M, parts, g.field)


# file format -----------------------------------------------------------------------


def parse_germ(text: str, field=None) -> HypersurfaceGerm:
    """Header ``M mu``, then one polynomial block per graded part ``q_mu..q_M``,
    blocks separated by lines holding ``--``."""
    lines = text.splitlines()
    header = None
    start = 0
    for k, raw in enumerate(lines):
        s = raw.split("#", 1)[0].strip()
        if s:
            header = (k + 1, s)
            start = k + 1
            break
    if header is None:
        raise ParseError("missing header")
    try:
        M, mu = (int(t) for t in header[1].split())
    except ValueError as exc:
        raise ParseError("header must be 'M mu'", header[0]) from exc
    field = GF() if field is None else field
    blocks = [[]]
    firsts = [start + 1]
    for k in range(start, len(lines)):
        if lines[k].strip() == "--":
            blocks.append([])
            firsts.append(k + 2)
        else:
            blocks[-1].append(lines[k])
    expected = M - mu + 1
    if len(blocks) != expected:
        raise ParseError(f"expected {expected} graded parts, found {len(blocks)}")
    parts = {}
    for off, (block, first) in enumerate(zip(blocks, firsts)):
        d = mu + off
        q = parse_polynomial(block, field, nvars=M, first_line=first)
        if not q.is_zero() and not (q.is_homogeneous() and q.degree() == d):
            raise ParseError(f"block for degree {d} is not a form of that degree", first)
        parts[d] = q
    g = HypersurfaceGerm.from_parts(M, parts, field)
    if g.q(mu).is_zero():
        raise ParseError("leading graded part is zero")
    return g


def format_germ(g: HypersurfaceGerm) -> str:
    mu = multiplicity(g)
    blocks = [format_polynomial(g.q(d)) for d in range(mu, g.M + 1)]
    return f"{g.M} {mu}\n" + "--\n".join(blocks)
