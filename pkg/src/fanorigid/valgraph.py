"""Resolution graphs of a valuation and the counting-of-multiplicities calculus:
path counts, arrow-weighted path sums, pruning, the Noether-Fano comparison, the
quadratic minimization identity and the threshold of the main codimension-two estimate.

Node 0 is the exceptional divisor over the point; arrows ``j -> i`` go from a later
blow-up to an earlier one (``j > i``).  Nodes ``1..L`` form the lower part, nodes
``L+1..K`` the upper part.
"""

from __future__ import annotations

import graphlib
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ResolutionGraph:
    K: int
    L: int
    deltas: tuple  # delta_0 .. delta_K
    mults: tuple  # mu_1 .. mu_K (index i-1 holds mu_i)
    arrows: frozenset  # pairs (j, i), j > i
    betas: Mapping = dc_field(default_factory=dict, compare=False)  # explicit overrides

    def __post_init__(self):
        K, L = self.K, self.L
        if K < 0 or not 0 <= L <= K:
            raise GraphError("need 0 <= L <= K")
        if len(self.deltas) != K + 1:
            raise GraphError(f"expected {K + 1} deltas")
        if len(self.mults) != K:
            raise GraphError(f"expected {K} multiplicities")
        if any(m < 1 for m in self.mults):
            raise GraphError("multiplicities must be >= 1")
        for i in range(1, K + 1):
            if i <= L and self.deltas[i] < 2:
                raise GraphError(f"lower node {i} needs delta >= 2")
            if i > L and self.deltas[i] != 1:
                raise GraphError(f"upper node {i} needs delta = 1")
        if self.deltas[0] < 1:
            raise GraphError("delta_0 must be positive")
        for j, i in self.arrows:
            if not (0 <= i < j <= K):
                raise GraphError(f"arrow {j}->{i} must point from a higher to a lower index")
        for key, b in self.betas.items():
            if key not in self.arrows:
                raise GraphError(f"weight given for missing arrow {key}")
            if Fraction(b) <= 0:
                raise GraphError("arrow weights must be positive")
        if K > 0 and path_counts(self)[0] == 0:
            raise GraphError("node K does not reach node 0")

    @classmethod
    def build(cls, K, L, deltas, mults, arrows: Iterable, betas: Mapping | None = None):
        arrows = list(arrows)
        seen = set()
        for a in arrows:
            a = tuple(a)
            if a in seen:
                raise GraphError(f"duplicate arrow {a[0]}->{a[1]}")
            seen.add(a)
        _check_acyclic(K, seen)
        return cls(K, L, tuple(deltas), tuple(mults), frozenset(seen),
                   {tuple(k): Fraction(v) for k, v in (betas or {}).items()})

    def into(self, i: int) -> list:
        return sorted(j for j, t in self.arrows if t == i)

    def beta(self, j: int, i: int, mu: int | None = None) -> Fraction:
        if (j, i) in self.betas:
            return self.betas[(j, i)]
        if i == 0 and mu is not None:
            return Fraction(2, mu)
        return Fraction(1)

    def with_arrows(self, arrows) -> "ResolutionGraph":
        arrows = frozenset(arrows)
        return ResolutionGraph(self.K, self.L, self.deltas, self.mults, arrows,
                               {k: v for k, v in self.betas.items() if k in arrows})


def _check_acyclic(K: int, arrows):
    ts = graphlib.TopologicalSorter({n: set() for n in range(K + 1)})
    for j, i in arrows:
        ts.add(i, j)
    try:
        tuple(ts.static_order())
    except graphlib.CycleError as exc:
        raise GraphError("not a DAG") from exc
    for j, i in arrows:
        if j <= i:
            raise GraphError(f"arrow {j}->{i} must point from a higher to a lower index")


def path_counts(g: ResolutionGraph, source: int | None = None) -> list:
    """Number of paths from ``source`` (default K) to each node."""
    s = g.K if source is None else source
    p = [0] * (g.K + 1)
    p[s] = 1
    for j in range(s, -1, -1):
        if p[j]:
            for jj, i in g.arrows:
                if jj == j:
                    p[i] += p[j]
    return p


def weights(g: ResolutionGraph, base: int | None = None, betas: Mapping | None = None,
            mu: int | None = None) -> list:
    """``w_{base, j}`` by the recursion ``w_{base,j} = sum_{k -> j} w_{base,k} beta_{k,j}``.

    ``betas`` overrides the graph's weights; when absent the graph's own overrides
    apply, then the defaults (``2/mu`` into node 0 if ``mu`` is given, else 1).
    """
    b = g.L if base is None else base
    w = [Fraction(0)] * (g.K + 1)
    w[b] = Fraction(1)
    for j in range(b - 1, -1, -1):
        total = Fraction(0)
        for k in g.into(j):
            if k <= b and w[k]:
                beta = Fraction(betas[(k, j)]) if betas and (k, j) in betas else g.beta(k, j, mu)
                total += w[k] * beta
        w[j] = total
    return w


def enumerate_paths(g: ResolutionGraph, source: int, target: int) -> list:
    out = []
    succ = {}
    for j, i in g.arrows:
        succ.setdefault(j, []).append(i)

    def walk(node, path):
        if node == target:
            out.append(tuple(path))
            return
        for nxt in succ.get(node, ()):
            if nxt >= target:
                walk(nxt, path + [nxt])

    walk(source, [source])
    return out


def brute_force_path_counts(g: ResolutionGraph) -> list:
    return [len(enumerate_paths(g, g.K, i)) for i in range(g.K + 1)]


def brute_force_weights(g: ResolutionGraph, base: int, betas: Mapping | None = None,
                        mu: int | None = None) -> list:
    out = []
    for t in range(g.K + 1):
        total = Fraction(0)
        if t <= base:
            for path in enumerate_paths(g, base, t):
                w = Fraction(1)
                for a, c in zip(path, path[1:]):
                    w *= Fraction(betas[(a, c)]) if betas and (a, c) in betas else g.beta(a, c, mu)
                total += w
        out.append(total)
    return out


def prune_to_estimate2(g: ResolutionGraph) -> ResolutionGraph:
    """Drop the arrows from upper nodes into node 0; afterwards ``p_0 <= p_1 + ... + p_L``."""
    if g.L == 0:
        raise GraphError("upper-only graph; the lower-part estimate is unavailable")
    kept = {(j, i) for j, i in g.arrows if not (i == 0 and j >= g.L + 1)}
    return g.with_arrows(kept)


def estimate2_holds(g: ResolutionGraph) -> bool:
    p = path_counts(g)
    return p[0] <= sum(p[1:g.L + 1])


def noether_fano(p: Sequence, delta: Sequence, nu: Sequence, n) -> bool:
    if not len(p) == len(delta) == len(nu):
        raise ValueError("vectors must have equal length")
    lhs = sum((Fraction(a) * Fraction(b) for a, b in zip(p, nu)), Fraction(0))
    rhs = Fraction(n) * sum((Fraction(a) * Fraction(b) for a, b in zip(p, delta)), Fraction(0))
    return lhs > rhs


@dataclass(frozen=True)
class QuadMin:
    value: Fraction
    nu0: Fraction
    nu_rest: tuple
    multiplier: Fraction


def quad_min(p0, p_rest: Sequence, C) -> QuadMin:
    """Minimum of ``2 p0 nu0^2 + sum p_i nu_i^2`` on ``p0 nu0 + sum p_i nu_i = C``:
    ``C^2 / (p0/2 + sum p_i)``, attained at ``nu0 = lambda/4``, ``nu_i = lambda/2``."""
    p0 = Fraction(p0)
    ps = [Fraction(x) for x in p_rest]
    C = Fraction(C)
    if p0 <= 0 or any(x <= 0 for x in ps):
        raise ValueError("path counts must be positive")
    if C <= 0:
        raise ValueError("C must be positive")
    S = p0 / 2 + sum(ps, Fraction(0))
    lam = 2 * C / S
    return QuadMin(C * C / S, lam / 4, tuple(lam / 2 for _ in ps), lam)


def quad_min_kkt(p0, p_rest: Sequence, C):
    """Direct stationarity solve of the same problem (gradient = lambda * constraint)."""
    ps = [Fraction(p0)] + [Fraction(x) for x in p_rest]
    n = len(ps)
    diag = [4 * ps[0]] + [2 * x for x in ps[1:]]
    A = []
    b = []
    for k in range(n):
        row = [Fraction(0)] * (n + 1)
        row[k] = diag[k]
        row[n] = -ps[k]
        A.append(row)
        b.append(Fraction(0))
    A.append(ps + [Fraction(0)])
    b.append(Fraction(C))
    kind, x = linalg.solve(A, b)
    if kind != "unique":
        raise ArithmeticError("stationarity system is singular")
    nu = x[:n]
    value = 2 * ps[0] * nu[0] ** 2 + sum((ps[k] * nu[k] ** 2 for k in range(1, n)), Fraction(0))
    return value, nu, x[n]


def prop6_threshold(g: ResolutionGraph, M: int, p: Sequence | None = None) -> Fraction:
    """Right side of the codimension-two estimate per unit degree:
    ``(sum p_i delta_i)^2 / ((p_0/2 + sum_{i>=1} p_i) M)``."""
    p = path_counts(g) if p is None else p
    num = sum((Fraction(a) * d for a, d in zip(p, g.deltas)), Fraction(0)) ** 2
    den = (Fraction(p[0]) / 2 + sum((Fraction(x) for x in p[1:]), Fraction(0))) * M
    return num / den


def prop6_lhs(g: ResolutionGraph, mu: int, m0, m_lower: Sequence, p: Sequence | None = None) -> Fraction:
    """``(2/mu) p_0 m(Y) + sum_{i=1}^L p_i m_i(Y)``."""
    p = path_counts(g) if p is None else p
    if len(m_lower) != g.L:
        raise ValueError(f"expected {g.L} lower multiplicities")
    out = Fraction(2, mu) * p[0] * Fraction(m0)
    for i, m in enumerate(m_lower, start=1):
        out += p[i] * Fraction(m)
    return out


def upper_only_threshold(p0, sigma_u, mu: int, M: int) -> Fraction:
    """Lower bound on ``m(Y)/deg Y`` when the lower part is empty."""
    p0 = Fraction(p0)
    s = Fraction(sigma_u)
    return Fraction(mu, 2) * ((M - mu - 1) * p0 + s) ** 2 / (p0 * (p0 / 2 + s) * M)


def e_divisor_bound(mu: int):
    """``(2/mu, 3/(2 mu))``: the bound on mult/deg for divisors on E, and the bound
    away from the tangent hyperplane section."""
    if mu < 3:
        raise ValueError("need mu >= 3")
    return Fraction(2, mu), Fraction(3, 2 * mu)


def e_chain_product(mu: int) -> Fraction:
    """Product of ``(i+1)/i`` over ``i`` in ``{1, 3, 4, ..., mu-1}``."""
    if mu < 3:
        raise ValueError("need mu >= 3")
    out = Fraction(2)
    for i in range(3, mu):
        out *= Fraction(i + 1, i)
    return out


# self-intersection bookkeeping ----------------------------------------------------


@dataclass(frozen=True)
class IntersectionData:
    """Synthetic data for the self-intersection system, in the general indexing
    where blow-ups are numbered ``1..K`` and level 0 is the variety itself.

    ``m[(i, j)]`` is the multiplicity of ``Z_i`` along the centre of blow-up ``j``.
    """

    graph: ResolutionGraph  # node t of the graph is blow-up t+1
    L: int
    nu: tuple  # nu_1..nu_K
    mults: tuple  # mu_1..mu_K
    d: tuple  # d_1..d_L
    m: Mapping
    betas: Mapping  # (j, i) -> beta, general indexing, i >= 1

    def weights(self) -> list:
        """``w_{L, j}`` for ``j = 1..L`` (list index j-1)."""
        shifted = {(j - 1, i - 1): b for (j, i), b in self.betas.items()}
        w = weights(self.graph, base=self.L - 1, betas=shifted)
        return w[: self.L]

    def equalities_hold(self) -> bool:
        for j in range(1, self.L + 1):
            rhs = sum((self.m.get((i, j), Fraction(0)) for i in range(0, j)), Fraction(0))
            if self.mults[j - 1] * self.nu[j - 1] ** 2 + self.d[j - 1] != rhs:
                return False
        upper = sum((self.mults[i - 1] * self.nu[i - 1] ** 2 for i in range(self.L + 1, len(self.nu) + 1)),
                    Fraction(0))
        if self.d[self.L - 1] < upper:
            return False
        for (i, j), v in self.m.items():
            if i >= 1 and v > self.betas.get((j, i), Fraction(0)) * self.d[i - 1]:
                return False
            if v < 0:
                return False
        return True

    def aggregated_inequality(self) -> tuple:
        w = self.weights()
        lhs = sum((w[j - 1] * self.m.get((0, j), Fraction(0)) for j in range(1, self.L + 1)), Fraction(0))
        rhs = sum((w[j - 1] * self.mults[j - 1] * self.nu[j - 1] ** 2 for j in range(1, self.L + 1)), Fraction(0))
        rhs += sum((self.mults[i - 1] * self.nu[i - 1] ** 2 for i in range(self.L + 1, len(self.nu) + 1)),
                   Fraction(0))
        return lhs, rhs


def _rand_frac(rng, hi=5, den=6):
    return Fraction(rng.randint(0, hi * den), rng.randint(1, den))


def random_resolution_graph(rng: random.Random, K: int, L: int | None = None, delta0: int = 2,
                            density: float = 0.4, with_chain: bool = True) -> ResolutionGraph:
    """Random graph with arrows ``j -> j-1`` plus extra random downward arrows."""
    if L is None:
        L = rng.randint(0, K)
    arrows = set()
    for j in range(1, K + 1):
        if with_chain:
            arrows.add((j, j - 1))
        for i in range(0, j - 1):
            if rng.random() < density:
                arrows.add((j, i))
    if not with_chain and K > 0:
        arrows.add((K, 0))
    deltas = [delta0] + [rng.randint(2, 4) if i <= L else 1 for i in range(1, K + 1)]
    mults = [rng.randint(1, 3) for _ in range(K)]
    return ResolutionGraph.build(K, L, deltas, mults, sorted(arrows))


def random_intersection_data(rng: random.Random, K: int, L: int) -> IntersectionData:
    """Random instance satisfying the self-intersection equalities with
    ``m_{i,j} <= beta_{j,i} d_i`` (and ``m_{i,j} = 0`` without an arrow ``j -> i``)."""
    if not 1 <= L <= K:
        raise ValueError("need 1 <= L <= K")
    # graph on blow-ups 1..K stored with node t = blow-up t+1
    g = random_resolution_graph(rng, K - 1, L - 1, delta0=2)
    arrows = {(j + 1, i + 1) for j, i in g.arrows}
    betas = {a: Fraction(rng.randint(1, 12), rng.randint(1, 6)) for a in arrows}
    nu = tuple(_rand_frac(rng) for _ in range(K))
    mults = tuple(rng.randint(1, 4) for _ in range(K))
    d = []
    m = {}
    upper = sum((mults[i - 1] * nu[i - 1] ** 2 for i in range(L + 1, K + 1)), Fraction(0))
    for j in range(1, L + 1):
        incoming = Fraction(0)
        for i in range(1, j):
            if (j, i) in arrows:
                v = betas[(j, i)] * d[i - 1] * Fraction(rng.randint(0, 10), 10)
                m[(i, j)] = v
                incoming += v
        base = mults[j - 1] * nu[j - 1] ** 2
        dj = _rand_frac(rng) + max(Fraction(0), incoming - base)
        if j == L:
            dj = max(dj, upper + _rand_frac(rng, 2))
        d.append(dj)
        m[(0, j)] = base + dj - incoming
    return IntersectionData(g, L, nu, mults, tuple(d), m, betas)


@dataclass(frozen=True)
class CoefficientSwitchCheck:
    scale: int  # p_{K,L}
    lhs_ok: bool
    rhs_ok: bool
    failures: tuple

    @property
    def implies(self) -> bool:
        return self.lhs_ok and self.rhs_ok


def coefficient_switch_check(g: ResolutionGraph) -> CoefficientSwitchCheck:
    """Coefficient check behind passing from the ``p_{L,*}`` form to the ``p_{K,*}`` form.

    Multiplying the first inequality by ``k = p_{K,L}`` yields the second when the
    left coefficients of the second dominate ``k`` times the first
    (``p_{K,i} >= k p_{L,i}`` for ``i <= L``) and ``k`` times the right coefficients
    dominate the second's (``k p_{L,i} >= p_{K,i}`` for ``i <= L``, ``k >= p_{K,i}``
    for ``i > L``).  The node-0 term uses ``p_{L,0}`` on both sides.
    """
    pK = path_counts(g)
    pL = path_counts(g, g.L)
    k = pK[g.L]
    failures = []
    lhs_ok = rhs_ok = True
    for i in range(0, g.L + 1):
        if pK[i] < k * pL[i]:
            lhs_ok = False
            failures.append(("lhs", i, pK[i], k * pL[i]))
        if k * pL[i] < pK[i]:
            rhs_ok = False
            failures.append(("rhs", i, k * pL[i], pK[i]))
    for i in range(g.L + 1, g.K + 1):
        if k < pK[i]:
            rhs_ok = False
            failures.append(("rhs", i, k, pK[i]))
    return CoefficientSwitchCheck(k, lhs_ok, rhs_ok, tuple(failures))


# file format -------------------------------------------------------------------------


def parse_graph(text: str) -> ResolutionGraph:
    from .algebra.textio import ParseError

    rows = []
    for n, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            rows.append((n, s.split()))
    if len(rows) < 2:
        raise ParseError("graph file needs 'K L', deltas and multiplicities")
    try:
        K, L = (int(x) for x in rows[0][1])
        deltas = [int(x) for x in rows[1][1]]
        # with K = 0 there are no multiplicities and the line is omitted
        mults = [int(x) for x in rows[2][1]] if K > 0 and len(rows) > 2 else []
    except ValueError as exc:
        raise ParseError("expected integers", rows[0][0]) from exc
    if K > 0 and not mults:
        raise ParseError("missing multiplicity line")
    arrows = []
    betas = {}
    for n, toks in rows[3 if K > 0 else 2:]:
        if len(toks) not in (2, 3):
            raise ParseError("arrow line must be 'j i [beta]'", n)
        try:
            j, i = int(toks[0]), int(toks[1])
            if len(toks) == 3:
                betas[(j, i)] = Fraction(toks[2])
        except ValueError as exc:
            raise ParseError("bad arrow", n) from exc
        arrows.append((j, i))
    return ResolutionGraph.build(K, L, deltas, mults, arrows, betas)


def format_graph(g: ResolutionGraph) -> str:
    lines = [f"{g.K} {g.L}", " ".join(map(str, g.deltas)), " ".join(map(str, g.mults))]
    for j, i in sorted(g.arrows, reverse=True):
        if (j, i) in g.betas:
            lines.append(f"{j} {i} {g.betas[(j, i)]}")
        else:
            lines.append(f"{j} {i}")
    return "\n".join(lines) + "\n"
