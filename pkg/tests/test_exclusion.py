import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
import scipy.optimize

from fanorigid.algebra import ParseError
from fanorigid.exclusion import (ConeRegion, DenominatorError, LinearForm, QuadForm,
                                 QuadraticRatioClaim, chain_system, exclude_L0, exclude_mu3_extension,
                                 exclude_mu_ge_5, exclude_Y_equals_R, format_claim, lemma3_case,
                                 mu4_system, parse_claim, core_claim, ratio_minimum, verify_ratio_bound)
from fanorigid.exclusion.cases import exclude_low_mult_point, exclude_smooth_center, lower_region
from fanorigid.exclusion.forms import ldl
from fanorigid.exclusion.ledger import LedgerConfig, ledger_status, ledger_tasks, run_claim_ledger
from fanorigid.exclusion.systems import (check_substitution, nonnegative_combination,
                                         polygon_vertices, project, sharp_normalization, var)

GRID = 50


def _grid_min(Q, region):
    """Exact minimum of ``Q`` over the slice points with denominator ``GRID``, in int64."""
    n = region.n
    pts = np.array([c + (GRID - sum(c),) for c in itertools.product(range(GRID + 1), repeat=n - 1)
                    if sum(c) <= GRID], dtype=np.int64)
    for g in region.extra:
        scale = math.lcm(*(c.denominator for c in g.coeffs))
        pts = pts[pts @ np.array([int(c * scale) for c in g.coeffs], dtype=np.int64) >= 0]
    scale = math.lcm(*(v.denominator for row in Q.matrix for v in row))
    A = np.array([[int(v * scale) for v in row] for row in Q.matrix], dtype=np.int64)
    vals = np.einsum("ki,ij,kj->k", pts, A, pts)
    return F(int(vals.min()), scale * GRID * GRID)


def _random_claim(rng):
    n = rng.choice((2, 3))
    names = ("a", "b", "c")[:n]
    region = ConeRegion.orthant(names)
    if n == 3 and rng.random() < 0.5:
        region = region.le([1, 0, 0], [0, 1, 0])
    B = 6
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            A[i][j] = A[j][i] = rng.randint(-B, B)
    l1 = LinearForm([rng.randint(1, 4) for _ in range(n)])
    l2 = LinearForm([rng.randint(1, 4) for _ in range(n)])
    bound = F(rng.randint(-3, 6), rng.randint(1, 4))
    return QuadraticRatioClaim(region, QuadForm(A), QuadForm.product(l1, l2), bound,
                               rng.random() < 0.3), B


def test_engine_against_grid_oracle():
    rng = random.Random(1234)
    for _ in range(200):
        claim, B = _random_claim(rng)
        cert = verify_ratio_bound(claim)
        assert cert.verify()
        gap = claim.gap
        grid_min = _grid_min(gap, claim.region)
        # the exact minimum is a lower bound for any grid value ...
        assert cert.minimum <= grid_min
        # ... and the grid comes within a Lipschitz margin of it
        n = claim.region.n
        lip = 2 * n * (B + abs(claim.bound) * 16 * n)
        assert grid_min - cert.minimum <= lip * F(n, GRID)
        if grid_min < 0 or (claim.strict and grid_min == 0):
            assert not cert.holds
        if cert.holds:
            assert grid_min >= 0
        else:
            v = cert.violator
            assert claim.region.contains(v)
            assert (gap(v) <= 0) if claim.strict else (gap(v) < 0)


def test_homogeneity_of_verdicts():
    rng = random.Random(77)
    for _ in range(40):
        claim, _ = _random_claim(rng)
        k = F(rng.randint(1, 9), rng.randint(1, 9))
        scaled = QuadraticRatioClaim(claim.region, claim.N * k, claim.D * k, claim.bound, claim.strict)
        rescaled = QuadraticRatioClaim(claim.region, claim.N, claim.D * k, claim.bound / k, claim.strict)
        c0, c1, c2 = (verify_ratio_bound(c, want_identity=False) for c in (claim, scaled, rescaled))
        assert c0.holds == c1.holds == c2.holds
        assert c1.minimum == k * c0.minimum and c2.minimum == c0.minimum
        # a point of the cone and any positive multiple give the same ratio
        p = claim.region.vertices[0]
        if claim.D(p) > 0:
            assert claim.ratio_at(p) == claim.ratio_at(tuple(3 * x for x in p))


def _walk(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _walk(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            yield from _walk(v)
    else:
        yield obj


def test_no_floats_anywhere():
    cert = verify_ratio_bound(core_claim(F(301, 100)))
    for x in _walk((cert.minimum, cert.minimizers, cert.violator, cert.violator_value)):
        assert not isinstance(x, float)
    for x in _walk(cert.to_dict()):
        assert not isinstance(x, float)
    with pytest.raises(TypeError):
        LinearForm([0.5, 1])
    with pytest.raises(TypeError):
        QuadForm([[1.0, 0], [0, 1]])
    rm = ratio_minimum(core_claim())
    assert isinstance(rm.value, F)


def test_core_claim_identity_and_corruption():
    cert = verify_ratio_bound(core_claim(3))
    assert cert.holds and cert.sos.pretty(("s", "t")) == "(s - t)^2"
    bad = verify_ratio_bound(core_claim(F(301, 100)))
    assert not bad.holds
    assert bad.violator == (F(1, 2), F(1, 2))
    assert bad.violator_value < 0
    assert bad.verify()


def test_ratio_minimum_exact_and_bracketed():
    rm = ratio_minimum(core_claim())
    assert rm.exact and rm.value == 3
    # min (x^2 + 3y^2) / (x^2 + 2xy + 2y^2) on the quadrant is the interior root (5 - sqrt(13))/2
    region = ConeRegion.orthant(("x", "y"))
    claim = QuadraticRatioClaim(region, QuadForm([[1, 0], [0, 3]]), QuadForm([[1, 1], [1, 2]]), 0)
    rm = ratio_minimum(claim)
    assert not rm.exact
    lo, hi = rm.bracket
    target = (5 - math.sqrt(13)) / 2
    assert float(lo) <= target + 1e-12 and float(hi) >= target - 1e-12
    assert hi - lo < F(1, 10 ** 9)
    assert verify_ratio_bound(claim.with_bound(lo)).holds
    assert not verify_ratio_bound(claim.with_bound(hi)).holds


def test_denominator_checks():
    region = ConeRegion.orthant(("x", "y"))
    N = QuadForm([[1, 0], [0, 1]])
    with pytest.raises(DenominatorError):
        verify_ratio_bound(QuadraticRatioClaim(region, N, QuadForm([[1, 0], [0, -1]]), 1))
    # D = xy vanishes on the axes where N > 0: the claim is vacuous there and still decided
    cert = verify_ratio_bound(QuadraticRatioClaim(region, N, QuadForm([[0, F(1, 2)], [F(1, 2), 0]]), 2))
    assert cert.holds
    with pytest.raises(DenominatorError):
        verify_ratio_bound(QuadraticRatioClaim(region, QuadForm([[0, 0], [0, 1]]),
                                               QuadForm([[0, 0], [0, 1]]), 1))


def test_sos_on_simplicial_cone_uses_ray_products():
    # xy >= 0 on the quadrant is not PSD but is a product of ray coordinates
    region = ConeRegion.orthant(("x", "y"))
    claim = QuadraticRatioClaim(region, QuadForm([[1, 1], [1, 1]]), QuadForm([[1, 0], [0, 1]]), 1)
    cert = verify_ratio_bound(claim)
    assert cert.holds and cert.sos is not None and cert.sos.products
    assert cert.sos.expand(2) == claim.gap


def test_ldl_detects_indefinite():
    assert ldl(((F(1), F(2)), (F(2), F(1)))) is None
    L, d = ldl(((F(4), F(2)), (F(2), F(2))))
    assert list(d) == [4, 1]


def test_region_geometry():
    r = lower_region()
    assert set(r.extreme_rays()) == {(0, 0, 1), (0, 1, 0), (1, 1, 0)}
    assert (F(1, 2), F(1, 2), 0) in r.vertices
    with pytest.raises(ValueError):
        ConeRegion.orthant(("x",)).le([1], [0]).vertices


def test_claim_file_round_trip_and_errors():
    claim = core_claim(3, restricted=True)
    text = format_claim(claim)
    back = parse_claim(text)
    assert back.N == claim.N and back.D == claim.D and back.bound == claim.bound
    assert back.region.rows == claim.region.rows
    for bad, msg in [("N: (0,0,1)\n", "variables"),
                     ("variables: s t\ns <= t + 1\nbound: 1\n", "homogeneous"),
                     ("variables: s t\nu <= t\nbound: 1\n", "unknown"),
                     ("variables: s t\nbound: 0.5\n", "rational"),
                     ("variables: s t\nN: (0,5,1)\nbound: 1\n", "range"),
                     ("variables: s t\nstrict: maybe\nbound: 1\n", "yes or no"),
                     ("variables: s t\nN: (0,0,1)\n", "bound")]:
        with pytest.raises(ParseError, match=msg):
            parse_claim(bad)


# systems ---------------------------------------------------------------------------


def test_affine_algebra():
    a = var("x") * 2 + var("y") - var("x")
    assert a.coeff("x") == 1 and a.evaluate({"x": 3, "y": 4}) == 7
    assert a.substitute({"x": var("y")}).coeff("y") == 2


def test_nonnegative_combination():
    assert nonnegative_combination(var("x") * 2, [var("x"), var("y")]) == [2, 0]
    assert nonnegative_combination(var("x") * -1, [var("x")]) is None


def _lp_max(system, direction, degY=1):
    names = list(system.variables) + [p for p in system.parameters if p != "degY"]
    idx = {v: k for k, v in enumerate(names)}
    A_ub, b_ub, A_eq, b_eq = [], [], [], []

    def row(expr):
        r = [0.0] * len(names)
        const = 0.0
        for v, c in expr.terms:
            if v == "degY":
                const += float(c) * degY
            else:
                r[idx[v]] += float(c)
        return r, const

    for q in system.inequalities:
        r, c = row(q.lhs - q.rhs)
        A_ub.append(r)
        b_ub.append(-c)
    for e in system.equalities:
        r, c = row(e.lhs - e.rhs)
        A_eq.append(r)
        b_eq.append(-c)
    obj = [0.0] * len(names)
    obj[idx["b#"]], obj[idx["b+"]] = -direction[0], -direction[1]
    res = scipy.optimize.linprog(obj, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq or None, b_eq=b_eq or None,
                                 bounds=[(0, None)] * len(names), method="highs")
    assert res.status == 0
    return -res.fun


@pytest.mark.parametrize("system", [mu4_system(7), mu4_system(11), chain_system(3, 7, 2, cap=True),
                                    chain_system(3, 6, 1, cap=True)])
def test_projection_matches_linear_programming(system):
    verts = polygon_vertices(project(system, ["b#", "b+"], {"degY": 1}))
    rng = random.Random(0)
    for _ in range(10):
        d = (rng.uniform(-1, 1), rng.uniform(-1, 1))
        best = max(d[0] * float(a) + d[1] * float(b) for a, b in verts)
        assert abs(best - _lp_max(system, d)) < 1e-7


def test_sharp_normalization_is_feasibility_preserving():
    for M in (7, 9, 15):
        chk = check_substitution(mu4_system(M), sharp_normalization(4, M))
        assert chk.ok
        assert all(d is not None for _, d in chk.derivations)


def test_template_reproduces_mu4():
    for M in range(7, 20):
        assert chain_system(4, M, 1) == mu4_system(M)


# cases -----------------------------------------------------------------------------


def test_low_mult_and_smooth():
    assert exclude_low_mult_point(10, 4).verdict == "contradiction"
    assert exclude_low_mult_point(6, 4).verdict == "not-applicable"
    assert exclude_smooth_center(7, 3).verdict == "contradiction"


def test_L0_corruption_is_reported():
    ok = exclude_L0(3, 8)
    assert ok.verdict == "contradiction" and ok.ok
    bad = exclude_L0(3, 8, corrupt={"prop7": F(301, 100)})
    assert bad.verdict == "claim-failed" and not bad.ok
    cert = bad.failing_certificates()[0]
    assert cert.violator == (F(1, 2), F(1, 2))


def test_Y_equals_R_refutes():
    for mu in (3, 4, 10):
        r = exclude_Y_equals_R(mu)
        assert r.verdict == "contradiction"


def test_special_cycle_case_strictness_at_mu4():
    r = lemma3_case(4, 8)
    assert r.verdict == "contradiction"
    assert lemma3_case(3, 7).verdict == "contradiction"


def test_mu_ge_5_at_equality_mu5():
    r = exclude_mu_ge_5(5, 9)
    assert r.verdict == "contradiction"
    neg = exclude_mu_ge_5(4, 9)
    assert neg.verdict == "no-contradiction" and neg.ok


def test_mu3_extension_needs_cap_at_M6():
    assert exclude_mu3_extension(6).verdict == "contradiction"
    uncapped = exclude_mu3_extension(6, cap=False)
    assert uncapped.verdict != "contradiction"
    assert uncapped.experimental


# ledger ----------------------------------------------------------------------------


def test_ledger_small_range():
    cfg = LedgerConfig(M_min=5, M_max=9)
    res = run_claim_ledger(cfg)
    assert len(res) == len(ledger_tasks(cfg))
    assert ledger_status(res) == 0
    assert ledger_status(res, strict_mu3=True) == 0
    bad = run_claim_ledger(LedgerConfig(M_min=6, M_max=7, corrupt=(("prop7", F(301, 100)),)))
    assert ledger_status(bad) == 1


def test_ledger_empty_and_deterministic():
    assert run_claim_ledger(LedgerConfig(M_min=9, M_max=8)) == []
    cfg = LedgerConfig(M_min=5, M_max=7)
    a = [r.to_dict() for r in run_claim_ledger(cfg)]
    b = [r.to_dict() for r in run_claim_ledger(cfg)]
    assert a == b
