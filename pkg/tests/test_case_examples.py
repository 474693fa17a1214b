"""Worked instances of every case pipeline, values checked by direct substitution."""

from fractions import Fraction as F

from fanorigid.exclusion import (LinearForm, QuadForm, QuadraticRatioClaim, exclude_L0,
                                 exclude_low_mult_point, exclude_mu3_extension, exclude_mu4,
                                 exclude_mu_ge_5, exclude_smooth_center, exclude_Y_equals_R, lemma3_case,
                                 verify_ratio_bound)
from fanorigid.exclusion.cases import lower_region, numerator, tail


def comps(r):
    return {c.label: c for c in r.comparisons}


def test_smooth_center_values():
    assert comps(exclude_smooth_center(5, 1))["(4/M) deg Z"].lhs == 4
    assert comps(exclude_smooth_center(12, 3))["(4/M) deg Z"].lhs == 36
    sym = exclude_smooth_center(9)
    assert sym.verdict == "contradiction" and "n^2" in sym.derived


def test_low_mult_values():
    assert comps(exclude_low_mult_point(6, 3))["(M-mu-1)^2 mu vs M"].lhs == 12
    assert comps(exclude_low_mult_point(7, 4))["(M-mu-1)^2 mu vs M"].lhs == 16


def test_L0_values_and_monotone_sweep():
    assert comps(exclude_L0(3, 7))["mult/deg of the cut-down cycle"].lhs == F(9, 5)
    assert comps(exclude_L0(5, 9))["mult/deg of the cut-down cycle"].lhs == F(15, 7)
    prev = F(0)
    for mu in range(3, 48):
        v = comps(exclude_L0(mu, mu + 3))["mult/deg of the cut-down cycle"].lhs
        assert 1 < v < 3 and v > prev
        prev = v


def test_forward_direction_fails_at_sample_point():
    mu = 3
    lin = LinearForm([F(2 * (mu + 2), mu), 1, 0])
    x = (F(1), F(1), F(0))
    assert lin(x) == F(13, 3)
    assert numerator()(x) / tail()(x) == F(32, 3)
    forward = QuadraticRatioClaim(lower_region(), QuadForm.product(lin, tail()), numerator(), 1)
    cert = verify_ratio_bound(forward, want_identity=False)
    assert not cert.holds and cert.verify()
    assert lower_region().contains(cert.violator)


def test_Y_equals_R_interior_sample_mu4():
    lin = LinearForm([F(2 * 6, 4), 1, 0])
    x = (F(1), F(2), F(1))
    rhs = numerator()(x) / tail()(x)
    assert rhs == 14
    assert lin(x) == 5 and lin(x) < rhs
    for mu in (3, 10):
        assert exclude_Y_equals_R(mu).verdict == "contradiction"


def test_special_cycle_case_values():
    c4 = comps(lemma3_case(4, 8))
    assert c4["lower bound vs (mu+2)/M"].lhs == c4["lower bound vs (mu+2)/M"].rhs  # equality, closed strictly
    c3 = comps(lemma3_case(3, 7))
    assert (c3["lower bound 6/M vs 5/M"].lhs, c3["lower bound 6/M vs 5/M"].rhs) == (F(6, 7), F(5, 7))


def test_mu_ge_5_boundary_and_slack():
    r5 = exclude_mu_ge_5(5, 9)
    c = comps(r5)["4mu/(3M) vs mu(mu+3)/((mu+1)M)"]
    assert c.lhs * 9 == F(20, 3) == c.rhs * 9
    assert "strict" in r5.strictness
    c7 = comps(exclude_mu_ge_5(7, 10))["4mu/(3M) vs mu(mu+3)/((mu+1)M)"]
    assert c7.rhs * 10 == F(70, 8) and c7.lhs * 10 == F(28, 3)


def test_mu4_values():
    r = exclude_mu4(7)
    c = comps(r)
    assert c["(mu+1)(mu+3)/(mu(mu+4))"].lhs == F(35, 32)
    assert c["mu^2 < 2mu+6"].lhs == 16 and c["mu^2 < 2mu+6"].rhs == 14
    assert r.system and any("sharp bound" in line for line in r.system)


def test_mu3_extension_routes_M6_to_single_step():
    r = exclude_mu3_extension(6)
    assert dict(r.params)["depth"] == 1
    assert dict(exclude_mu3_extension(7).params)["depth"] == 2
