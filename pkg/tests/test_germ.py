import random
from fractions import Fraction

import pytest

from fanorigid import germ
from fanorigid.algebra import GF, ParseError, Polynomial, dimension


@pytest.fixture(scope="module")
def g53():
    return germ.random_germ(5, 3, seed=1)


def test_multiplicity_and_tangent_cone(g53):
    assert germ.multiplicity(g53) == 3
    cone = germ.tangent_cone(g53)
    assert cone.is_homogeneous() and cone.degree() == 3
    assert cone == g53.q(3)


def test_from_equation_recovers_parts(g53):
    g2 = germ.HypersurfaceGerm.from_equation(g53.equation)
    assert g2 == g53


def test_germ_text_round_trip(g53):
    assert germ.parse_germ(germ.format_germ(g53)) == g53


def test_parse_germ_errors():
    with pytest.raises(ParseError, match="header"):
        germ.parse_germ("5\n")
    with pytest.raises(ParseError, match="graded parts"):
        germ.parse_germ("5 3\n1 3 0 0 0 0\n")
    bad = "5 4\n1 4 0 0 0 0\n--\n1 2 0 0 0 0\n"
    with pytest.raises(ParseError, match="not a form"):
        germ.parse_germ(bad)


def test_regularity_passes_and_iii_not_applicable(g53):
    rep = germ.check_regularity(g53, sample_count=3, seed=2)
    assert rep.verdicts() == {"i": "pass", "ii": "pass", "iii": "n/a"}
    assert rep.passed()


def test_zero_samples_skip_ii(g53):
    rep = germ.check_regularity(g53, sample_count=0)
    assert rep.verdicts()["ii"] == "skipped"


def test_engineered_germ_fails_with_prefix_witness():
    bad = germ.engineered_irregular_germ(5, 3, seed=4)
    rep = germ.check_regularity(bad, sample_count=1)
    assert rep.conditions["i"].verdict == "fail"
    assert rep.conditions["i"].witness == {"prefix": 2}
    assert not rep.passed()


def test_cone_points_lie_on_cone(g53):
    pts = germ.cone_points(g53.q(3), 5, random.Random(0))
    assert len(pts) == 5
    for y in pts:
        assert g53.q(3).evaluate(y) == 0
        assert any(c != 0 for c in y)


def test_base_locus_codim(g53):
    assert [germ.base_locus_codim(g53, i) for i in (3, 4)] == [1, 2]
    with pytest.raises(ValueError):
        germ.base_locus_codim(g53, 5)


def test_hypertangent_member_order(g53):
    for i in (3, 4):
        h = germ.hypertangent_system(g53, i, seed=1)
        assert h.restricted_order() >= i + 1


def test_hypertangent_ratio_and_chain():
    assert germ.hypertangent_ratio(3, 3, 7) == Fraction(12, 21)
    assert germ.chain_factor([3, 4, 5], 3, 7) == Fraction(6, 3)
    with pytest.raises(ValueError):
        germ.chain_factor([3, 3], 3, 7)
    with pytest.raises(ValueError):
        germ.chain_factor([7], 3, 7)


def test_cycle_T_stats_default_and_verified():
    assert germ.cycle_T_stats(4) == (8, 6)
    F = GF(32003)
    rng = random.Random(5)
    from fanorigid.algebra import random_homogeneous
    cone = random_homogeneous(5, 3, F, rng)
    chk = germ.cycle_T_stats(3, cone, seed=1)
    assert (chk.degree, chk.mult) == (6, 6)


def test_special_cycle_R():
    assert germ.special_cycle_R_stats(3, 7) == (Fraction(5, 7), 1)


def test_smooth_regularity():
    F = GF(32003)
    rng = random.Random(2)
    from fanorigid.algebra import random_homogeneous
    parts = {d: random_homogeneous(5, d, F, rng) for d in range(1, 6)}
    g = germ.HypersurfaceGerm.from_parts(5, parts, F)
    assert germ.check_smooth_regularity(g).passed()


def test_random_germ_argument_checks():
    with pytest.raises(ValueError):
        germ.random_germ(4, 2)
    with pytest.raises(ValueError):
        germ.random_germ(6, 5)


@pytest.mark.slow
def test_condition_iii_at_M6():
    g = germ.random_germ(6, 3, seed=3)
    rep = germ.check_regularity(g, sample_count=1, seed=1)
    assert rep.verdicts()["iii"] == "pass"
