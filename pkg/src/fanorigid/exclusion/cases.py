"""Case pipelines: each one assembles exact ratio certificates and rational comparisons
into a verdict about a putative maximal singularity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Mapping, Optional

from ..germ import chain_factor, cycle_T_stats, special_cycle_R_stats
from .cone import ConeRegion
from .forms import LinearForm, QuadForm
from .ratio import Certificate, QuadraticRatioClaim, ratio_minimum, verify_ratio_bound
from .systems import (Affine, Equality, InequalitySystem, chain_system, check_substitution,
                      mu4_system, normalization_factor, polygon_vertices, project,
                      sharp_normalization, var)

F = Fraction
PSU = ("p0", "sl", "su")


@dataclass(frozen=True)
class Comparison:
    """An exact rational comparison ``lhs rel rhs`` together with its truth value."""

    label: str
    lhs: Fraction
    rel: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        a, b = self.lhs, self.rhs
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b, "=": a == b}[self.rel]

    def to_dict(self) -> dict:
        return {"label": self.label, "lhs": str(self.lhs), "rel": self.rel, "rhs": str(self.rhs),
                "holds": self.holds}


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    params: tuple
    verdict: str  # contradiction | no-contradiction | not-applicable | claim-failed
    derived: str = ""
    certificates: tuple = ()
    comparisons: tuple = ()
    strictness: str = ""
    expected: str = "contradiction"
    experimental: bool = False
    notes: tuple = ()
    system: tuple = ()

    def __post_init__(self):
        if self.verdict == "contradiction":
            if not all(c.holds and c.verified for c in self.certificates):
                raise AssertionError(f"{self.case_id}: contradiction without valid certificates")

    @property
    def ok(self) -> bool:
        return self.verdict in (self.expected, "not-applicable")

    def failing_certificates(self) -> list:
        return [c for c in self.certificates if not c.holds]

    def to_dict(self) -> dict:
        out = {
            "case": self.case_id,
            "params": {k: v for k, v in self.params},
            "verdict": self.verdict,
            "expected": self.expected,
            "ok": self.ok,
            "derived": self.derived,
            "strictness": self.strictness,
            "experimental": self.experimental,
            "certificates": [c.to_dict() for c in self.certificates],
            "comparisons": [c.to_dict() for c in self.comparisons],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.system:
            out["system"] = list(self.system)
        return out


def _params(**kw) -> tuple:
    return tuple(sorted(kw.items()))


def _na(case_id: str, reason: str, **kw) -> CaseResult:
    return CaseResult(case_id, _params(**kw), "not-applicable", derived=reason)


def _finish(case_id, params, certs, comps, contradiction: bool, derived, **kw) -> CaseResult:
    if not all(c.holds for c in certs):
        verdict = "claim-failed"
    else:
        verdict = "contradiction" if contradiction else "no-contradiction"
    return CaseResult(case_id, params, verdict, derived, tuple(certs), tuple(comps), **kw)


# shared regions and forms -------------------------------------------------------------------

@lru_cache(maxsize=None)
def lower_region() -> ConeRegion:
    """``p0 <= sl`` with all three sums nonnegative."""
    return ConeRegion.orthant(PSU).le([1, 0, 0], [0, 1, 0], label="p0 <= sl")


@lru_cache(maxsize=None)
def quadrant(restricted: bool = False) -> ConeRegion:
    r = ConeRegion.orthant(("s", "t"))
    return r.le([1, 0], [0, 1], label="s <= t") if restricted else r


def numerator() -> QuadForm:
    """``(2 p0 + 2 sl + su)^2``."""
    return QuadForm.square(LinearForm([2, 2, 1]))


def tail() -> LinearForm:
    return LinearForm([F(1, 2), 1, 1])


def lower_claim(first: LinearForm, bound, label: str, strict: bool = False) -> QuadraticRatioClaim:
    """``(2p0+2sl+su)^2 >= bound * first * (p0/2 + sl + su)`` on ``p0 <= sl``."""
    return QuadraticRatioClaim(lower_region(), numerator(), QuadForm.product(first, tail()),
                               F(bound), strict, label)


def core_claim(bound=3, restricted: bool = False) -> QuadraticRatioClaim:
    """``(2s+t)^2 >= bound * 2s(s/2+t)``."""
    return QuadraticRatioClaim(quadrant(restricted), QuadForm.square(LinearForm([2, 1])),
                               QuadForm.product(LinearForm([2, 0]), LinearForm([F(1, 2), 1])),
                               F(bound), False, "core-quadrant")


def w_bound(mu: int) -> Fraction:
    """Upper bound for mult_y/deg of a codimension-2 cycle ``W != T`` on the tangent cone,
    as the reciprocal of the hypertangent chain over ``{2} | [4, mu-1]``."""
    if mu < 3:
        raise ValueError("need mu >= 3")
    prod = F(3, 2)
    for i in range(4, mu):
        prod *= F(i + 1, i)
    return 1 / prod


def t_ratio(mu: int) -> Fraction:
    deg, mult = cycle_T_stats(mu)
    return F(mult, deg)


# smooth centres and low multiplicity --------------------------------------------------------

def exclude_smooth_center(M: int, n: Optional[int] = None) -> CaseResult:
    """``mult Z > 4 n^2`` against ``mult Z <= (4/M) deg Z`` with ``deg Z = M n^2``.

    ``n=None`` checks the identity symbolically, as equality of the ``n^2`` coefficients.
    """
    if M < 5:
        return _na("smooth-center", "need M >= 5", M=M, n=n)
    if n is None:
        coeff = F(4, M) * M
        comps = [Comparison("coefficient of n^2 in (4/M)*deg Z", coeff, "=", F(4))]
        return _finish("smooth-center", _params(M=M, n="symbolic"), [], comps, comps[0].holds,
                       "(4/M)*M*n^2 = 4*n^2", strictness="mult Z > 4n^2 is strict")
    if n < 1:
        raise ValueError("n must be positive")
    upper = F(4, M) * (M * n * n)
    comps = [Comparison("(4/M) deg Z", upper, "=", F(4 * n * n))]
    return _finish("smooth-center", _params(M=M, n=n), [], comps, comps[0].holds,
                   f"4n^2 < mult Z <= {upper}",
                   strictness="mult Z > 4n^2 is strict")


def exclude_low_mult_point(M: int, mu: int) -> CaseResult:
    if not 3 <= mu <= M - 3:
        return _na("low-mult-point", "outside 3 <= mu <= M-3", M=M, mu=mu)
    lhs = F((M - mu - 1) ** 2 * mu)
    comps = [Comparison("(M-mu-1)^2 mu vs M", lhs, ">", F(M))]
    return _finish("low-mult-point", _params(M=M, mu=mu), [], comps, comps[0].holds,
                   f"{lhs} > {M}")


# L = 0 --------------------------------------------------------------------------------------

def exclude_L0(mu: int, M: int, corrupt: Optional[Mapping] = None) -> CaseResult:
    if mu < 3 or M < mu + 3:
        return _na("L0", "need mu >= 3 and M >= mu+3", mu=mu, M=M)
    bound = F((corrupt or {}).get("prop7", 3))
    region = quadrant(restricted=True)
    weak = QuadraticRatioClaim(region, QuadForm.square(LinearForm([M - mu - 1, 1])),
                               QuadForm.square(LinearForm([2, 1])), 1, False, "L0-weakening")
    core = core_claim(bound, restricted=True)
    certs = [verify_ratio_bound(weak), verify_ratio_bound(core)]
    lower = bound * mu / M
    chain = chain_factor(range(mu + 2, M), mu, M)
    comps = [
        Comparison("chain factor over [mu+2, M-1]", chain, "=", F(M, mu + 2)),
        Comparison("mult/deg of the cut-down cycle", lower * chain, ">", F(1)),
    ]
    return _finish("L0", _params(mu=mu, M=M), certs, comps, all(c.holds for c in comps),
                   f"{lower * chain} > 1 is impossible for an effective cycle",
                   strictness="not needed: the final gap is strict",
                   notes=("weakening uses M-mu-1 >= 2",))


# Y = R --------------------------------------------------------------------------------------

def exclude_Y_equals_R(mu: int) -> CaseResult:
    if mu < 3:
        return _na("Y=R", "need mu >= 3", mu=mu)
    coef = F(2 * (mu + 2), mu)
    lin = LinearForm([coef, 1, 0])
    refute = lower_claim(lin, 1, f"Y=R refutation mu={mu}")
    forward = QuadraticRatioClaim(lower_region(), QuadForm.product(lin, tail()), numerator(), 1,
                                  False, f"Y=R claim mu={mu}")
    certs = [verify_ratio_bound(refute)]
    forward_cert = verify_ratio_bound(forward, want_identity=False)
    sample = (F(1), F(1), F(0))
    lhs = lin(sample)
    rhs = numerator()(sample) / tail()(sample)
    comps = [
        Comparison("LHS coefficient vs the mu=3 value", coef, "<=", F(10, 3)),
        Comparison("sample (1,1,0): LHS vs RHS", lhs, "<", rhs),
        Comparison("claimed inequality fails somewhere", F(int(not forward_cert.holds)), "=", F(1)),
    ]
    return _finish("Y=R", _params(mu=mu), certs, comps, all(c.holds for c in comps),
                   "the required strict inequality is false on the whole cone",
                   strictness="refutation is of a strict claim, so LHS <= RHS suffices",
                   notes=(f"claimed direction fails at {tuple(str(v) for v in forward_cert.violator)}",))


# the special cycle ------------------------------------------------------------------------------------

def lemma3_case(mu: int, M: int) -> CaseResult:
    if mu < 3 or M < mu + 3:
        return _na("lemma3", "need mu >= 3 and M >= mu+3", mu=mu, M=M)
    upper, _ = special_cycle_R_stats(mu, M)
    params = _params(mu=mu, M=M)
    if mu >= 4:
        w = w_bound(mu)
        comps = [Comparison("W-cycle coefficient 8/(3mu)", w, "=", F(8, 3 * mu))]
        claim = lower_claim(LinearForm([2, mu * w, 0]), F(3, 2), "lemma3 ratio 3/2")
        cert = verify_ratio_bound(claim)
        lower = F(3, 2) * mu / M
        comps.append(Comparison("lower bound vs (mu+2)/M", lower, ">=", upper))
        equal = lower == upper
        return _finish("lemma3", params, [cert], comps, comps[-1].holds,
                       f"3mu/2 < mu+2 would be needed, i.e. mu < 4; here mu = {mu}",
                       strictness=("closes only through the strict lower bound" if equal
                                   else "strict lower bound, with room to spare"))
    w = w_bound(3)
    comps = [Comparison("W-cycle coefficient 2/3", w, "=", F(2, 3))]
    claim = lower_claim(LinearForm([2, mu * w, 0]), 2, "lemma3 ratio 2 (mu=3)")
    cert = verify_ratio_bound(claim)
    lower = F(2) * mu / M
    comps.append(Comparison("lower bound 6/M vs 5/M", lower, ">", upper))
    return _finish("lemma3", params, [cert], comps, comps[-1].holds, "6/M > 5/M contradicts the upper bound",
                   strictness="strict lower bound")


# mu >= 5 ------------------------------------------------------------------------------------

def exclude_mu_ge_5(mu: int, M: int) -> CaseResult:
    """Runs for any ``mu >= 4``; at ``mu = 4`` the pipeline is expected not to close."""
    if mu < 4 or M < mu + 3:
        return _na("mu>=5", "need mu >= 4 and M >= mu+3", mu=mu, M=M)
    comps = [Comparison("T ratio 3/mu", t_ratio(mu), "=", F(3, mu))]
    claim = lower_claim(LinearForm([2, 3, 0]), F(4, 3), "mu>=5 ratio 4/3")
    cert = verify_ratio_bound(claim)
    chain = chain_factor([mu] + list(range(mu + 3, M)), mu, M)
    comps.append(Comparison("chain factor", chain, "=", F((mu + 1) * M, mu * (mu + 3))))
    lower = F(4, 3) * mu / M
    upper = 1 / chain
    comps.append(Comparison("4mu/(3M) vs mu(mu+3)/((mu+1)M)", lower, ">=", upper))
    closes = comps[-1].holds
    if lower == upper:
        strict = "equality boundary: closes only through the strict lower bound from the Noether-Fano inequality"
    elif closes:
        strict = "strict lower bound, with room to spare"
    else:
        strict = "no contradiction: the lower bound is below the upper bound"
    return _finish("mu>=5", _params(mu=mu, M=M), [cert], comps, closes,
                   f"mu(mu+3)/(mu+1) > 4mu/3 needs mu < 5; here mu = {mu}",
                   strictness=strict, expected="contradiction" if mu >= 5 else "no-contradiction")


# chain systems and branches -----------------------------------------------------------------

@dataclass(frozen=True)
class Branch:
    vertex: tuple  # (b#, b+) at deg Y = 1
    value: Fraction  # coefficient c in N >= c (2p0 + k sl)(p0/2 + sl + su)
    sl_coeff: Fraction
    certificate: Certificate
    ratio_min: Optional[Fraction]


def branches(system: InequalitySystem, mu: int, M: int, w: Fraction) -> list:
    """Project onto ``(b#, b+)`` at ``deg Y = 1`` and turn every nonzero vertex into a ratio
    claim. The objective ``(2/mu p0 + t sl) b# + (2/mu p0 + w sl) b+`` is linear in the
    multiplicities, so its maximum over the projected polygon sits at a vertex."""
    verts = polygon_vertices(project(system, ["b#", "b+"], {"degY": 1}))
    t = t_ratio(mu)
    out = []
    for bs, bp in verts:
        if bs == 0 and bp == 0:
            continue
        p0 = M * F(2, mu) * (bs + bp)
        sl = M * (t * bs + w * bp)
        value = p0 / 2
        k = sl / value
        claim = lower_claim(LinearForm([2, k, 0]), value, f"branch ({bs}, {bp})")
        cert = verify_ratio_bound(claim)
        rm = ratio_minimum(claim)
        out.append(Branch((bs, bp), value, k, cert, rm.value if rm.exact else None))
    return out


def exclude_mu4(M: int) -> CaseResult:
    mu = 4
    if M < 7:
        return _na("mu4", "need M >= 7", M=M)
    system = mu4_system(M)
    comps = [Comparison("template at mu=4 reproduces the system", F(int(chain_system(mu, M, 1) == system)),
                        "=", F(1))]
    sub = check_substitution(system, sharp_normalization(mu, M))
    comps.append(Comparison("sharp normalization preserves feasibility", F(int(sub.ok)), "=", F(1)))
    comps.append(Comparison("(mu+1)(mu+3)/(mu(mu+4))", normalization_factor(mu), ">=", F(1)))
    normalized = InequalitySystem(system.variables, system.parameters, system.inequalities,
                                  system.equalities + (
                                      _eq_zero("delta# = 0 after normalization", "delta#"),))
    verts = polygon_vertices(project(system, ["b#", "b+"], {"degY": 1}))
    verts_n = polygon_vertices(project(normalized, ["b#", "b+"], {"degY": 1}))
    comps.append(Comparison("normalized projection equals the original", F(int(verts == verts_n)), "=", F(1)))
    w = w_bound(mu)
    comps.append(Comparison("W-cycle coefficient 8/(3mu)", w, "=", F(8, 3 * mu)))
    brs = branches(normalized, mu, M, w)
    by_k = {b.sl_coeff: b for b in brs}
    b1, b2 = by_k.get(F(3)), by_k.get(F(8, 3))
    if b1 is None or b2 is None or len(brs) != 2:
        raise AssertionError("unexpected branch structure at mu=4")
    setup_ok = all(c.holds for c in comps)
    v1 = Comparison("branch 1 value (mu+4)/(mu+2)", b1.value, "=", F(mu + 4, mu + 2))
    e1 = Comparison("branch 1 escape: value > min ratio", b1.value, ">", b1.ratio_min)
    d1 = Comparison("mu < 4", F(mu), "<", F(4))
    v2 = Comparison("branch 2 value (mu+3)(mu+1)/(mu(mu+2))", b2.value, "=",
                    F((mu + 3) * (mu + 1), mu * (mu + 2)))
    e2 = Comparison("branch 2 escape: value > min ratio", b2.value, ">", b2.ratio_min)
    d2 = Comparison("mu^2 < 2mu+6", F(mu * mu), "<", F(2 * mu + 6))
    comps += [v1, e1, d1, v2, e2, d2]
    structural = setup_ok and v1.holds and v2.holds
    escapes = any(c.holds for c in (e1, d1, e2, d2))
    certs = [b.certificate for b in brs]
    return _finish("mu4", _params(mu=mu, M=M), certs, comps, structural and not escapes,
                   "both branches need mu < 4 or mu^2 < 2mu+6, false at mu = 4",
                   strictness=f"branch 1 sits at equality {b1.value} = {b1.ratio_min} and closes through "
                              f"the strict Noether-Fano inequality; branch 2 has slack {b2.ratio_min - b2.value}",
                   system=tuple(system.lines()))


def _eq_zero(name: str, v: str) -> Equality:
    return Equality(name, var(v), Affine())


def exclude_mu3_extension(M: int, depth: Optional[int] = None, cap: bool = True) -> CaseResult:
    """The chain one step deeper at ``mu = 3``; all constants come from the template.

    ``M = 6`` uses the single-step system. Degree bounds are capped at 1.
    """
    mu = 3
    if M < 6:
        return _na("mu3-extension", "need M >= 6", M=M)
    if depth is None:
        depth = 1 if M == 6 else 2
    system = chain_system(mu, M, depth, cap=cap)
    w = w_bound(mu)
    brs = branches(system, mu, M, w)
    comps = [Comparison("W-cycle coefficient 2/3", w, "=", F(2, 3))]
    for b in brs:
        if b.ratio_min is not None:
            comps.append(Comparison(f"branch {b.vertex}: value vs min ratio", b.value, "<=", b.ratio_min))
    closes = all(b.certificate.holds for b in brs) and bool(brs)
    return _finish("mu3-extension", _params(mu=mu, M=M, depth=depth, cap=cap),
                   [b.certificate for b in brs], comps, closes,
                   "every branch value is at most its ratio minimum" if closes
                   else "some branch value exceeds its ratio minimum",
                   strictness="branches close through the strict Noether-Fano inequality",
                   experimental=True,
                   notes=("derived extension, no independent derivation to check against",
                          "degree bounds capped at 1" if cap else "uncapped degree bounds"),
                   system=tuple(system.lines()))
