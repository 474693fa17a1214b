"""Linear inequality systems for the multiplicity bookkeeping along chains of hypertangent
divisors, with exact projection by Fourier-Motzkin elimination."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from ..linalg import solve


def _fr(x) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class Affine:
    """``sum coeffs[v] * v`` over named variables; kept as a sorted tuple of pairs."""

    terms: tuple

    def __init__(self, terms: Mapping | Sequence = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for v, c in items:
            acc[v] = acc.get(v, Fraction(0)) + _fr(c)
        object.__setattr__(self, "terms", tuple(sorted((v, c) for v, c in acc.items() if c != 0)))

    def coeff(self, v: str) -> Fraction:
        return dict(self.terms).get(v, Fraction(0))

    def variables(self) -> set:
        return {v for v, _ in self.terms}

    def __add__(self, other: "Affine") -> "Affine":
        return Affine(self.terms + other.terms)

    def __sub__(self, other: "Affine") -> "Affine":
        return Affine(self.terms + tuple((v, -c) for v, c in other.terms))

    def __mul__(self, k) -> "Affine":
        k = _fr(k)
        return Affine(tuple((v, k * c) for v, c in self.terms))

    __rmul__ = __mul__

    def evaluate(self, values: Mapping) -> Fraction:
        return sum((c * _fr(values[v]) for v, c in self.terms), Fraction(0))

    def substitute(self, mapping: Mapping[str, "Affine"]) -> "Affine":
        out = Affine()
        for v, c in self.terms:
            out = out + (mapping[v] * c if v in mapping else Affine({v: c}))
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        s = ""
        for k, (v, c) in enumerate(self.terms):
            a = abs(c)
            t = v if a == 1 else f"{a}*{v}"
            s += ("-" + t if c < 0 else t) if k == 0 else (f" - {t}" if c < 0 else f" + {t}")
        return s


def var(name: str) -> Affine:
    return Affine({name: 1})


@dataclass(frozen=True)
class Inequality:
    """``lhs <= rhs``."""

    name: str
    lhs: Affine
    rhs: Affine

    @property
    def residual(self) -> Affine:
        return self.rhs - self.lhs

    def __str__(self):
        return f"{self.lhs} <= {self.rhs}"


@dataclass(frozen=True)
class Equality:
    name: str
    lhs: Affine
    rhs: Affine

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class InequalitySystem:
    """Nonnegative ``variables`` subject to the listed relations; ``parameters`` are positive
    scale quantities such as the degree of the cycle."""

    variables: tuple
    parameters: tuple
    inequalities: tuple
    equalities: tuple

    def all_names(self) -> tuple:
        return self.variables + self.parameters

    def lines(self) -> list:
        out = [f"{v} >= 0" for v in self.variables]
        out += [f"[{e.name}] {e}" for e in self.equalities]
        out += [f"[{q.name}] {q}" for q in self.inequalities]
        return out

    def inequality(self, name: str) -> Inequality:
        for q in self.inequalities:
            if q.name == name:
                return q
        raise KeyError(name)

    def satisfied_by(self, values: Mapping) -> bool:
        if any(_fr(values[v]) < 0 for v in self.variables):
            return False
        if any(e.lhs.evaluate(values) != e.rhs.evaluate(values) for e in self.equalities):
            return False
        return all(q.lhs.evaluate(values) <= q.rhs.evaluate(values) for q in self.inequalities)


# nonnegative combinations -------------------------------------------------------------------

def nonnegative_combination(target: Affine, generators: Sequence[Affine]):
    """Coefficients ``lam >= 0`` with ``sum lam_k g_k = target``, or ``None``.

    By Caratheodory a solution exists iff one exists supported on linearly independent
    generators; those supports are enumerated exhaustively.
    """
    names = sorted(set().union(target.variables(), *(g.variables() for g in generators)))
    cols = [[g.coeff(v) for v in names] for g in generators]
    b = [target.coeff(v) for v in names]
    if all(x == 0 for x in b):
        return [Fraction(0)] * len(generators)
    for size in range(1, min(len(generators), len(names)) + 1):
        for support in combinations(range(len(generators)), size):
            A = [[cols[k][i] for k in support] for i in range(len(names))]
            status, lam = solve(A, b)
            if status == "unique" and all(x >= 0 for x in lam):
                out = [Fraction(0)] * len(generators)
                for k, x in zip(support, lam):
                    out[k] = x
                return out
    return None


@dataclass(frozen=True)
class SubstitutionCheck:
    """Each relation of the system, pulled back along ``mapping``, as a nonnegative
    combination of the original residuals and variables."""

    mapping: tuple
    derivations: tuple  # (relation name, {generator: coefficient})
    ok: bool


def check_substitution(system: InequalitySystem, mapping: Mapping[str, Affine]) -> SubstitutionCheck:
    """Verify that ``mapping`` sends feasible points to feasible points.

    Every transformed inequality residual, and every transformed variable, must be a
    nonnegative combination of the original inequality residuals and the original variables.
    Equalities must be preserved identically (modulo the original equalities is not needed
    for the substitutions used here).
    """
    gens = [(f"[{q.name}]", q.residual) for q in system.inequalities]
    gens += [(v, var(v)) for v in system.variables]
    derivs = []
    ok = True
    targets = [(f"[{q.name}]", q.residual.substitute(mapping)) for q in system.inequalities]
    targets += [(f"{v} >= 0", var(v).substitute(mapping)) for v in system.variables]
    for label, t in targets:
        lam = nonnegative_combination(t, [g for _, g in gens])
        if lam is None:
            ok = False
            derivs.append((label, None))
        else:
            derivs.append((label, tuple((n, c) for (n, _), c in zip(gens, lam) if c != 0)))
    for e in system.equalities:
        before = e.lhs - e.rhs
        after = e.lhs.substitute(mapping) - e.rhs.substitute(mapping)
        same = before == after
        ok = ok and same
        derivs.append((f"[{e.name}]", "preserved" if same else None))
    return SubstitutionCheck(tuple(sorted(mapping.items())), tuple(derivs), ok)


# projection ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class Halfspace:
    """``coeffs . x <= bound`` over the kept variables."""

    coeffs: tuple
    bound: Fraction


def _normalize(row: dict, b: Fraction):
    scale = max(abs(c) for c in row.values()) if row else Fraction(1)
    return tuple(sorted((v, c / scale) for v, c in row.items() if c != 0)), b / scale


def project(system: InequalitySystem, keep: Sequence[str], fixed: Mapping[str, Fraction]) -> list:
    """Fourier-Motzkin projection of the feasible set onto ``keep`` after fixing the
    parameters; returns a list of ``Halfspace``."""
    rows: list = []  # (dict coeffs, bound) meaning coeffs.x <= bound

    def add(expr: Affine, strict_eq: bool = False):
        coeffs, const = {}, Fraction(0)
        for v, c in expr.terms:
            if v in fixed:
                const += c * _fr(fixed[v])
            else:
                coeffs[v] = coeffs.get(v, Fraction(0)) + c
        rows.append((coeffs, -const))
        if strict_eq:
            rows.append(({v: -c for v, c in coeffs.items()}, const))

    for q in system.inequalities:
        add(q.lhs - q.rhs)
    for e in system.equalities:
        add(e.lhs - e.rhs, strict_eq=True)
    for v in system.variables:
        if v not in fixed:
            rows.append(({v: Fraction(-1)}, Fraction(0)))

    eliminate = [v for v in system.all_names() if v not in keep and v not in fixed]
    current = _dedupe(rows)
    for v in eliminate:
        pos = [(r, b) for r, b in current if r.get(v, 0) > 0]
        neg = [(r, b) for r, b in current if r.get(v, 0) < 0]
        zero = [(r, b) for r, b in current if r.get(v, 0) == 0]
        new = list(zero)
        for rp, bp in pos:
            for rn, bn in neg:
                a, c = rp[v], -rn[v]
                comb = {}
                for w in set(rp) | set(rn):
                    x = c * rp.get(w, 0) + a * rn.get(w, 0)
                    if x != 0 and w != v:
                        comb[w] = x
                new.append((comb, c * bp + a * bn))
        current = _dedupe(new)
    out = []
    for r, b in current:
        out.append(Halfspace(tuple(r.get(k, Fraction(0)) for k in keep), b))
    return out


def _dedupe(rows):
    best: dict = {}
    for r, b in rows:
        r = {k: c for k, c in r.items() if c != 0}
        if not r:
            if b < 0:
                raise ValueError("infeasible system")
            continue
        key, nb = _normalize(r, b)
        if key not in best or nb < best[key]:
            best[key] = nb
    return [(dict(k), b) for k, b in best.items()]


def polygon_vertices(halfspaces: Sequence[Halfspace]) -> list:
    """Vertices of a bounded polygon given by halfspaces in two variables."""
    verts = set()
    for h1, h2 in combinations(halfspaces, 2):
        status, x = solve([list(h1.coeffs), list(h2.coeffs)], [h1.bound, h2.bound])
        if status != "unique":
            continue
        if all(sum((c * xi for c, xi in zip(h.coeffs, x)), Fraction(0)) <= h.bound for h in halfspaces):
            verts.add(tuple(x))
    return sorted(verts)


# the chain template -------------------------------------------------------------------------

def _cap(x: Fraction, cap: bool) -> Fraction:
    return min(Fraction(1), x) if cap else x


def level_names(k: int) -> dict:
    sharp = "#" * k
    head = "#" * (k - 1)
    return {
        "d_sharp": f"d{sharp}", "d_plus": f"d{head}+",
        "delta_sharp": f"delta{sharp}", "delta_plus": f"delta{head}+",
    }


def chain_system(mu: int, M: int, depth: int, cap: bool = False) -> InequalitySystem:
    """Inequalities obtained by intersecting with ``D_{mu+1}, ..., D_{mu+depth}``, splitting
    each intersection into the part over the tangent-cone divisor and the rest, and closing
    the chain with ``D_mu``.

    ``cap`` replaces each degree bound ``r`` by ``min(1, r)``; the multiplicity of an
    effective cycle at a point never exceeds its degree.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    mu, M = int(mu), int(M)
    variables = ["d#", "d+", "b#", "b+", "delta#", "delta+"]
    for k in range(2, depth + 1):
        n = level_names(k)
        variables += [n["d_sharp"], n["d_plus"], n["delta_sharp"], n["delta_plus"]]
    eqs = [
        Equality("degree split 1", var("d#") + var("d+"), var("degY") * (mu + 1)),
        Equality("multiplicity split", var("b#") + var("b+"), var("m0")),
    ]
    ineqs = []
    P = Fraction(mu + 2)  # E-degree of the tangent-cone part after k steps, per unit b#
    prev_mult = (var("b#") + var("b+")) * (mu + 2)
    for k in range(1, depth + 1):
        n = level_names(k)
        if k > 1:
            P *= mu + k + 1
            pn = level_names(k - 1)
            eqs.append(Equality(f"degree split {k}", var(n["d_sharp"]) + var(n["d_plus"]),
                                var(pn["d_sharp"]) * (mu + k)))
        sharp_mult = var("b#") * P + var(n["delta_sharp"])
        ineqs.append(Inequality(f"E-degree step {mu + k}", prev_mult,
                                sharp_mult + var(n["delta_plus"])))
        ineqs.append(Inequality(f"plus bound {k}", var(n["delta_plus"]),
                                var(n["d_plus"]) * _cap(Fraction(mu + k + 2, M), cap)))
        prev_mult = sharp_mult * (mu + k + 2)
        last_sharp = sharp_mult
    close = Fraction(mu, mu + 1) * _cap(Fraction(mu + depth + 3, M), cap)
    ineqs.append(Inequality("sharp bound", last_sharp, var(level_names(depth)["d_sharp"]) * close))
    return InequalitySystem(tuple(variables), ("degY", "m0"), tuple(ineqs), tuple(eqs))


def mu4_system(M: int) -> InequalitySystem:
    """The six-variable system at ``mu = 4``, written out directly."""
    mu = 4
    return InequalitySystem(
        ("d#", "d+", "b#", "b+", "delta#", "delta+"),
        ("degY", "m0"),
        (
            Inequality("E-degree step 5", (var("b#") + var("b+")) * (mu + 2),
                       var("b#") * (mu + 2) + var("delta#") + var("delta+")),
            Inequality("plus bound 1", var("delta+"), var("d+") * Fraction(mu + 3, M)),
            Inequality("sharp bound", var("b#") * (mu + 2) + var("delta#"),
                       var("d#") * Fraction(mu * (mu + 4), (mu + 1) * M)),
        ),
        (
            Equality("degree split 1", var("d#") + var("d+"), var("degY") * (mu + 1)),
            Equality("multiplicity split", var("b#") + var("b+"), var("m0")),
        ),
    )


def sharp_normalization(mu: int, M: int) -> dict:
    """Move ``delta#`` into ``delta+`` and shift the matching degree from ``d#`` to ``d+``."""
    shift = var("delta#") * Fraction(M * (mu + 1), mu * (mu + 4))
    return {
        "delta+": var("delta+") + var("delta#"),
        "delta#": Affine(),
        "d#": var("d#") - shift,
        "d+": var("d+") + shift,
    }


def normalization_factor(mu: int) -> Fraction:
    """The factor in ``delta# <= delta# (mu+1)(mu+3)/(mu(mu+4))``; the step needs it ``>= 1``."""
    return Fraction((mu + 1) * (mu + 3), mu * (mu + 4))
