"""Exact decision of quadratic-ratio bounds ``N(x) >= c D(x)`` on polyhedral cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg

from ..linalg import solve
from .cone import ConeRegion, slice_minimum
from .forms import LinearForm, QuadForm, SOSIdentity, ldl


class DenominatorError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticRatioClaim:
    """The claim ``N >= bound * D`` (``>`` when strict) on ``region``."""

    region: ConeRegion
    N: QuadForm
    D: QuadForm
    bound: Fraction
    strict: bool = False
    label: str = ""
    anchor: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.N.n != self.region.n or self.D.n != self.region.n:
            raise ValueError("form arity does not match the region")

    @property
    def gap(self) -> QuadForm:
        return self.N - self.D * self.bound

    def with_bound(self, bound, strict: Optional[bool] = None) -> "QuadraticRatioClaim":
        return QuadraticRatioClaim(self.region, self.N, self.D, Fraction(bound),
                                   self.strict if strict is None else strict, self.label, self.anchor)

    def ratio_at(self, x) -> Optional[Fraction]:
        d = self.D(x)
        return None if d == 0 else self.N(x) / d

    def describe(self) -> str:
        rel = ">" if self.strict else ">="
        names = self.region.names
        return f"{self.N.pretty(names)} {rel} {self.bound} * ({self.D.pretty(names)}) on {self.region.describe()}"


@dataclass(frozen=True)
class Certificate:
    """Proof or refutation of a claim.

    ``minimizers`` lists every face candidate of ``N - cD`` on the slice with its exact value.
    A refutation carries ``violator`` with ``N - cD`` equal to ``violator_value``.
    """

    claim: QuadraticRatioClaim
    verdict: str
    minimum: Fraction
    minimizers: tuple
    violator: Optional[tuple] = None
    violator_value: Optional[Fraction] = None
    sos: Optional[SOSIdentity] = None

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    @property
    def equality_locus(self) -> tuple:
        return tuple(p for p, v in self.minimizers if v == 0)

    @cached_property
    def verified(self) -> bool:
        return self.verify()

    def verify(self) -> bool:
        """Re-evaluate every reported point and identity exactly."""
        claim = self.claim
        gap = claim.gap
        for p, v in self.minimizers:
            if not claim.region.contains(p) or gap(p) != v:
                return False
        if self.minimizers and min(v for _, v in self.minimizers) != self.minimum:
            return False
        if self.holds:
            ok = self.minimum > 0 if claim.strict else self.minimum >= 0
            if not ok:
                return False
            if self.sos is not None and self.sos.expand(claim.region.n) != gap:
                return False
            return True
        if self.violator is None or not claim.region.contains(self.violator):
            return False
        if gap(self.violator) != self.violator_value:
            return False
        return self.violator_value <= 0 if claim.strict else self.violator_value < 0

    def to_dict(self) -> dict:
        names = self.claim.region.names
        out = {
            "claim": self.claim.label or self.claim.describe(),
            "verdict": self.verdict,
            "bound": str(self.claim.bound),
            "strict": self.claim.strict,
            "minimum_of_gap": str(self.minimum),
            "minimizers": [{"point": [str(c) for c in p], "gap": str(v)} for p, v in self.minimizers],
        }
        if self.violator is not None:
            out["violator"] = dict(zip(names, (str(c) for c in self.violator)))
            out["violator_gap"] = str(self.violator_value)
            r = self.claim.ratio_at(self.violator)
            if r is not None:
                out["violator_ratio"] = str(r)
        if self.sos is not None:
            out["identity"] = f"N - {self.claim.bound}*D = {self.sos.pretty(names)}"
        return out


def check_denominator(claim: QuadraticRatioClaim) -> None:
    """``D >= 0`` on the cone, and ``N > 0`` wherever ``D`` vanishes (the ratio is then
    ``+inf``, so the claim is vacuous there)."""
    dmin, cands = slice_minimum(claim.D, claim.region)
    if dmin < 0:
        raise DenominatorError("denominator not positive on cone")
    if dmin == 0:
        # zero set of a PSD-on-cone form: check N on a sample of it via the gap minimum
        for c in cands:
            if c.value == 0 and claim.N(c.point) <= 0:
                raise DenominatorError("denominator not positive on cone")
        nmin = _min_on_zero_set(claim)
        if nmin is not None and nmin <= 0:
            raise DenominatorError("denominator not positive on cone")


def _min_on_zero_set(claim: QuadraticRatioClaim) -> Optional[Fraction]:
    """Minimum of ``N`` over the points of the slice where ``D = 0`` that lie on faces on
    which ``D`` vanishes identically."""
    best = None
    region = claim.region
    for f in region.faces:
        if f.dim == 0:
            continue
        H, h, c = claim.D.restrict(f.x0, f.basis)
        if c == 0 and all(v == 0 for v in h) and all(v == 0 for row in H for v in row):
            sub = ConeRegion(region.names, region.extra + tuple(
                LinearForm([-v for v in region.rows[i].coeffs]) for i in f.active))
            try:
                m, _ = slice_minimum(claim.N, sub)
            except ValueError:
                continue
            best = m if best is None else min(best, m)
    return best


def _sos(gap: QuadForm, region: ConeRegion) -> Optional[SOSIdentity]:
    n = region.n
    fact = ldl(gap.matrix)
    if fact is not None:
        L, d = fact
        squares = tuple((d[k], LinearForm([L[i][k] for i in range(n)])) for k in range(n) if d[k] != 0)
        return SOSIdentity(squares)
    rays = region.extreme_rays()
    if len(rays) != n:
        return None
    R = [[Fraction(rays[k][i]) for k in range(n)] for i in range(n)]  # columns are rays
    # z = R^{-1} x; row i of R^{-1} is the linear form giving z_i
    Rinv_rows = []
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        st, col = solve(R, e)
        if st != "unique":
            return None
        Rinv_rows.append(col)
    Rinv = [[Rinv_rows[j][i] for j in range(n)] for i in range(n)]
    A = gap.matrix
    Qz = [[sum((R[a][i] * A[a][b] * R[b][j] for a in range(n) for b in range(n)), Fraction(0))
           for j in range(n)] for i in range(n)]
    P = [[Qz[i][j] if i == j or Qz[i][j] < 0 else Fraction(0) for j in range(n)] for i in range(n)]
    fact = ldl(P)
    if fact is None:
        return None
    L, d = fact
    z = [LinearForm(Rinv[i]) for i in range(n)]

    def in_x(coeffs_z):
        return sum((z[i] * coeffs_z[i] for i in range(n)), LinearForm([0] * n))

    squares = tuple((d[k], in_x([L[i][k] for i in range(n)])) for k in range(n) if d[k] != 0)
    products = tuple((2 * Qz[i][j], z[i], z[j]) for i in range(n) for j in range(i + 1, n) if Qz[i][j] > 0)
    ident = SOSIdentity(squares, products)
    return ident if ident.expand(n) == gap else None


@lru_cache(maxsize=4096)
def verify_ratio_bound(claim: QuadraticRatioClaim, want_identity: bool = True) -> Certificate:
    check_denominator(claim)
    gap = claim.gap
    gmin, cands = slice_minimum(gap, claim.region)
    minimizers = tuple(sorted({(c.point, c.value) for c in cands}, key=lambda t: (t[1], t[0])))
    holds = gmin > 0 if claim.strict else gmin >= 0
    if holds:
        sos = _sos(gap, claim.region) if want_identity else None
        return Certificate(claim, "holds", gmin, minimizers, sos=sos)
    violator = None
    rm = ratio_minimum(claim)
    if rm.exact and rm.points:
        p = rm.points[0]
        v = gap(p)
        if (v <= 0 if claim.strict else v < 0):
            violator = p
    if violator is None:
        violator = minimizers[0][0]
    return Certificate(claim, "fails", gmin, minimizers, violator, gap(violator))


@dataclass(frozen=True)
class RatioMinimum:
    """Exact ``min N/D`` over the cone when ``exact``; otherwise ``bracket`` encloses it."""

    value: Optional[Fraction]
    exact: bool
    points: tuple
    bracket: tuple

    def __float__(self):
        return float(self.value) if self.exact else float(sum(self.bracket) / 2)


def _gap_min(claim: QuadraticRatioClaim, theta: Fraction):
    return slice_minimum(claim.N - claim.D * theta, claim.region)


def _eigen_guesses(claim: QuadraticRatioClaim) -> set:
    guesses = set()
    region = claim.region
    for f in region.faces:
        if f.dim == 0:
            continue
        # linear span of the face inside the cone: x0 together with the basis directions
        cols = [f.x0] + list(f.basis)
        k = len(cols)
        A = np.array([[float(sum(cols[a][i] * claim.N.matrix[i][j] * cols[b][j]
                                 for i in range(region.n) for j in range(region.n)))
                       for b in range(k)] for a in range(k)])
        B = np.array([[float(sum(cols[a][i] * claim.D.matrix[i][j] * cols[b][j]
                                 for i in range(region.n) for j in range(region.n)))
                       for b in range(k)] for a in range(k)])
        try:
            vals = scipy.linalg.eigvals(A, B)
        except (np.linalg.LinAlgError, ValueError):
            continue
        for v in vals:
            if np.isfinite(v) and abs(v.imag) < 1e-9 * max(1.0, abs(v.real)):
                for den in (10, 1000, 10 ** 6):
                    guesses.add(Fraction(float(v.real)).limit_denominator(den))
    return guesses


@lru_cache(maxsize=4096)
def ratio_minimum(claim: QuadraticRatioClaim, bisection_steps: int = 40) -> RatioMinimum:
    """``min N/D`` over the cone minus the zero set of ``D``.

    Candidates come from vertex ratios and floating generalized eigenvalues of the
    restricted pencils; a candidate ``q`` is accepted only if ``min(N - qD) = 0`` exactly with
    a witness where ``D > 0``. Otherwise the minimum is bracketed by exact bisection.
    """
    check_denominator(claim)
    verts = [v for v in claim.region.vertices if claim.D(v) > 0]
    if not verts:
        raise DenominatorError("denominator not positive on cone")
    hi = min(claim.N(v) / claim.D(v) for v in verts)
    guesses = sorted(q for q in _eigen_guesses(claim) | {hi} if q <= hi)

    def zero_witnesses(q):
        m, cands = _gap_min(claim, q)
        pts = tuple(sorted({c.point for c in cands if c.value == 0 and claim.D(c.point) > 0}))
        return m, pts

    lo = None
    for q in reversed(guesses):
        m, pts = zero_witnesses(q)
        if m == 0 and pts:
            return RatioMinimum(q, True, pts, (q, q))
        if m > 0:
            lo = q
            break
        hi = min(hi, q)
    if lo is None:
        width = max(abs(hi), Fraction(1))
        lo = hi - width
        while _gap_min(claim, lo)[0] <= 0:
            width *= 2
            lo = hi - width
    for _ in range(bisection_steps):
        mid = (lo + hi) / 2
        m, pts = zero_witnesses(mid)
        if m == 0 and pts:
            return RatioMinimum(mid, True, pts, (mid, mid))
        if m > 0:
            lo = mid
        else:
            hi = mid
    return RatioMinimum(None, False, (), (lo, hi))
