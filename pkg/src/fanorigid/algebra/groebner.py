"""Buchberger's algorithm (grevlex, Gebauer-Moeller pair criteria, sugar selection),
ideal dimension from the leading-term staircase, and prefix-codimension regular
sequence checks.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .. import _kernels
from .fields import PrimeField
from .polynomial import Polynomial, divides, grevlex_key, mono_lcm


@dataclass(frozen=True)
class Ideal:
    gens: tuple
    nvars: int

    def __init__(self, gens: Sequence[Polynomial], nvars: int | None = None):
        gens = tuple(gens)
        if nvars is None:
            if not gens:
                raise ValueError("empty ideal needs an explicit variable count")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generators must share the variable count")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "nvars", nvars)

    @property
    def field(self):
        return self.gens[0].field


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Groebner basis sorted by increasing leading monomial."""

    polys: tuple
    nvars: int
    field: object
    order: str = "grevlex"
    stats: dict = dc_field(default_factory=dict, compare=False, hash=False)

    def leading_exponents(self) -> list:
        return [g.leading_exponent() for g in self.polys]

    def is_unit(self) -> bool:
        return any(g.degree() == 0 for g in self.polys)

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form of ``f`` (unique since the basis is Groebner)."""
        if f.is_zero() or not self.polys:
            return f
        rep = _rep_for(self.field)
        r = rep.nf(rep.from_poly(f), [rep.from_poly(g) for g in self.polys])
        return rep.to_poly(r, self.nvars)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)


# representations --------------------------------------------------------------


class _ModpRep:
    """Polynomials as (exps int32[n, N], coeffs int64[n]) arrays, for the kernels."""

    def __init__(self, field: PrimeField):
        self.field = field
        self.p = field.p

    def from_poly(self, f: Polynomial):
        items = f.sorted_terms()
        N = f.nvars
        if not items:
            return (np.empty((0, N), dtype=np.int32), np.empty(0, dtype=np.int64))
        exps = np.array([e for e, _ in items], dtype=np.int32).reshape(len(items), N)
        coeffs = np.array([c for _, c in items], dtype=np.int64)
        return exps, coeffs

    def to_poly(self, rep, nvars) -> Polynomial:
        exps, coeffs = rep
        terms = {tuple(int(x) for x in e): int(c) for e, c in zip(exps, coeffs)}
        return Polynomial._raw(nvars, terms, self.field)

    def is_zero(self, rep) -> bool:
        return rep[1].shape[0] == 0

    def lm(self, rep):
        return tuple(int(x) for x in rep[0][0])

    def monic(self, rep):
        exps, coeffs = rep
        inv = pow(int(coeffs[0]), -1, self.p)
        return exps, (coeffs * inv) % self.p

    def nf(self, rep, basis):
        if self.is_zero(rep) or not basis:
            return rep
        return _kernels.nf_modp(rep[0], rep[1], list(basis), self.p)

    def spoly(self, a, b):
        return _kernels.spoly_modp(a[0], a[1], b[0], b[1], self.p)

    def degree(self, rep) -> int:
        return int(rep[0].sum(axis=1).max()) if rep[0].shape[0] else -1


class _GenericRep:
    """Plain :class:`Polynomial` objects; used over the rationals."""

    def __init__(self, field):
        self.field = field

    def from_poly(self, f):
        return f

    def to_poly(self, rep, nvars):
        return rep

    def is_zero(self, rep) -> bool:
        return rep.is_zero()

    def lm(self, rep):
        return rep.leading_exponent()

    def monic(self, rep):
        return rep.monic()

    def degree(self, rep) -> int:
        return rep.degree()

    def spoly(self, a, b):
        la, ca = a.leading_term()
        lb, cb = b.leading_term()
        lcm = mono_lcm(la, lb)
        F = a.field
        ua = tuple(x - y for x, y in zip(lcm, la))
        ub = tuple(x - y for x, y in zip(lcm, lb))
        return a.mul_term(ua, F.inv(ca)) - b.mul_term(ub, F.inv(cb))

    def nf(self, f, basis):
        if f.is_zero() or not basis:
            return f
        F = f.field
        cur = dict(f.terms)
        heap = [((-sum(e), tuple(reversed(e))), e) for e in cur]
        heapq.heapify(heap)
        gens = []
        for g in basis:
            lm, lc = g.leading_term()
            inv = F.inv(lc)
            gens.append((lm, [(e, F.mul(c, inv)) for e, c in g.terms.items() if e != lm]))
        rem = {}
        while heap:
            _, lead = heapq.heappop(heap)
            c = cur.pop(lead, None)
            if c is None:
                continue
            for lm, tail in gens:
                if divides(lm, lead):
                    shift = tuple(b - a for a, b in zip(lm, lead))
                    for e, gc in tail:
                        m = tuple(x + y for x, y in zip(e, shift))
                        old = cur.get(m)
                        v = F.sub(F.zero if old is None else old, F.mul(c, gc))
                        if v != 0:
                            cur[m] = v
                            if old is None:
                                heapq.heappush(heap, ((-sum(m), tuple(reversed(m))), m))
                        elif old is not None:
                            del cur[m]
                    break
            else:
                rem[lead] = c
        return Polynomial._raw(f.nvars, rem, F)


def _rep_for(field):
    if isinstance(field, PrimeField):
        return _ModpRep(field)
    return _GenericRep(field)


# Buchberger --------------------------------------------------------------------


def groebner(ideal: Ideal | Sequence[Polynomial], max_pairs: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis in graded reverse lexicographic order."""
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal)
    if not ideal.gens:
        raise ValueError("empty generator list")
    N = ideal.nvars
    F = ideal.field
    rep = _rep_for(F)

    polys: list = []  # all basis elements ever added
    lms: list = []
    sugar: list = []
    active: list[int] = []  # indices that still matter for pairs (Gebauer-Moeller G)
    pairs: list = []  # heap of (sugar, grevlex key of lcm, i, j)
    stats = {"pairs_reduced": 0, "zero_reductions": 0, "backend": _kernels.BACKEND}

    def add(h):
        nonlocal pairs, active
        hidx = len(polys)
        polys.append(h)
        hlm = rep.lm(h)
        lms.append(hlm)
        # Gebauer-Moeller update
        C = list(active)
        D: list[int] = []
        while C:
            g1 = C.pop(0)
            l1 = mono_lcm(hlm, lms[g1])
            disjoint = all(a == 0 or b == 0 for a, b in zip(hlm, lms[g1]))
            if disjoint or not any(
                divides(mono_lcm(hlm, lms[g2]), l1) for g2 in itertools.chain(C, D)
            ):
                D.append(g1)
        E = [g for g in D if not all(a == 0 or b == 0 for a, b in zip(hlm, lms[g]))]
        kept = []
        for entry in pairs:
            _, _, i, j = entry
            lij = mono_lcm(lms[i], lms[j])
            if divides(hlm, lij) and mono_lcm(lms[i], hlm) != lij and mono_lcm(hlm, lms[j]) != lij:
                continue
            kept.append(entry)
        for g in E:
            l = mono_lcm(hlm, lms[g])
            s = max(sugar[hidx] + sum(l) - sum(hlm), sugar[g] + sum(l) - sum(lms[g]))
            kept.append((s, _neg_key(l), g, hidx))
        heapq.heapify(kept)
        pairs = kept
        active = [g for g in active if not divides(hlm, lms[g])] + [hidx]

    def reducers():
        return [polys[i] for i in active]

    unit = False
    for f in ideal.gens:
        r = rep.from_poly(f)
        r = rep.nf(r, reducers())
        if rep.is_zero(r):
            continue
        r = rep.monic(r)
        sugar.append(rep.degree(r))
        add(r)
        if rep.degree(r) == 0:
            unit = True
            break

    count = 0
    while pairs and not unit:
        s, _, i, j = heapq.heappop(pairs)
        sp = rep.spoly(polys[i], polys[j])
        h = rep.nf(sp, reducers())
        stats["pairs_reduced"] += 1
        count += 1
        if max_pairs is not None and count > max_pairs:
            raise RuntimeError("pair budget exhausted")
        if rep.is_zero(h):
            stats["zero_reductions"] += 1
            continue
        h = rep.monic(h)
        sugar.append(max(s, rep.degree(h)))
        add(h)
        if rep.degree(h) == 0:
            unit = True

    if unit:
        one = Polynomial.constant(N, 1, F)
        return GroebnerBasis((one,), N, F, stats=stats)

    # interreduce the minimal basis
    minimal = [polys[i] for i in active]
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        r = rep.monic(rep.nf(g, others)) if others else g
        reduced.append(rep.to_poly(r, N))
    reduced.sort(key=lambda g: grevlex_key(g.leading_exponent()))
    return GroebnerBasis(tuple(reduced), N, F, stats=stats)


def _neg_key(e):
    # heap orders ascending; smaller grevlex lcm first
    return (sum(e), tuple(-x for x in reversed(e)))


# dimension and regular sequences ------------------------------------------------


def ideal_dimension(G: GroebnerBasis) -> int:
    """Krull dimension of the affine variety of the ideal; -1 for the unit ideal.

    Largest set of variables containing the support of no leading monomial.
    """
    if G.is_unit():
        return -1
    N = G.nvars
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in G.leading_exponents()]
    supports = [s for s in supports if s]
    for size in range(N, -1, -1):
        for subset in itertools.combinations(range(N), size):
            S = frozenset(subset)
            if not any(s <= S for s in supports):
                return size
    return 0


def dimension(polys: Sequence[Polynomial], nvars: int | None = None) -> int:
    return ideal_dimension(groebner(Ideal(polys, nvars)))


def regular_sequence_witness(polys: Sequence[Polynomial], ambient_dim: int | None = None):
    """First prefix length whose zero set fails to have codimension equal to its
    length, together with the observed dimensions; ``(None, dims)`` when regular."""
    polys = list(polys)
    if not polys:
        return None, []
    N = polys[0].nvars if ambient_dim is None else ambient_dim
    for f in polys:
        if f.nvars != N:
            raise ValueError("polynomial lives in the wrong number of variables")
        if f.constant_term() != 0:
            raise ValueError("not in the maximal ideal")
    dims = []
    basis: list[Polynomial] = []
    for j, f in enumerate(polys, start=1):
        G = groebner(Ideal(basis + [f], N))
        basis = list(G.polys)
        d = ideal_dimension(G)
        dims.append(d)
        if d != N - j:
            return j, dims
    return None, dims


def is_regular_sequence(polys: Sequence[Polynomial], ambient_dim: int | None = None) -> bool:
    """True iff every prefix of length j cuts out a set of codimension exactly j."""
    witness, _ = regular_sequence_witness(polys, ambient_dim)
    return witness is None
