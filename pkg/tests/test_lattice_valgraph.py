import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanorigid import lattice, valgraph
from fanorigid.algebra import ParseError
from fanorigid.valgraph import GraphError, ResolutionGraph


# lattice ---------------------------------------------------------------------------


@given(st.integers(4, 60), st.integers(-50, 50), st.integers(-50, 50))
def test_tau_is_linear_involution(M, a, b):
    c = lattice.DivisorClass(a, b, M, M - 2)
    assert lattice.tau_action(lattice.tau_action(c)) == c
    d = lattice.DivisorClass(b, a, M, M - 2)
    assert lattice.tau_action(c + d) == lattice.tau_action(c) + lattice.tau_action(d)


def test_tau_on_generators():
    M = 7
    assert lattice.tau_action(lattice.H(M)) == lattice.DivisorClass(6, 7, 7, 5)
    assert lattice.tau_action(lattice.E(M)) == lattice.DivisorClass(-5, -6, 7, 5)


def test_maximality_bound_and_T_class():
    for M in range(5, 20):
        T = lattice.T_class(M)
        assert (T.a, T.b) == (M - 2, M - 1)
        assert lattice.maximality_bound(M) == F(M, M - 1)


def test_untwist_examples():
    r = lattice.untwist_check(4, 5, 5)
    assert (r.new_n, r.new_nu) == (1, 0) and r.inequality_holds
    with pytest.raises(ValueError):
        lattice.untwist_check(5, 5, 7)
    with pytest.raises(TypeError):
        lattice.DivisorClass(1.0, 0, 5, 3)


# graphs -----------------------------------------------------------------------------


def _chain(K, L):
    deltas = [2] + [2 if i <= L else 1 for i in range(1, K + 1)]
    return ResolutionGraph.build(K, L, deltas, [1] * K, [(j, j - 1) for j in range(1, K + 1)])


def test_chain_path_counts():
    g = _chain(4, 2)
    assert valgraph.path_counts(g) == [1] * 5
    assert valgraph.brute_force_path_counts(g) == [1] * 5


def test_graph_validation():
    with pytest.raises(GraphError, match="delta"):
        ResolutionGraph.build(2, 1, [2, 1, 1], [1, 1], [(1, 0), (2, 1)])
    with pytest.raises(GraphError, match="higher"):
        ResolutionGraph.build(1, 0, [2, 1], [1], [(0, 1)])
    with pytest.raises(GraphError, match="reach"):
        ResolutionGraph.build(2, 0, [2, 1, 1], [1, 1], [(1, 0)])
    with pytest.raises(GraphError, match="duplicate"):
        ResolutionGraph.build(1, 0, [2, 1], [1], [(1, 0), (1, 0)])


def test_default_beta_into_node_zero():
    g = _chain(2, 1)
    w = valgraph.weights(g, base=1, mu=4)
    assert w[0] == F(1, 2)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=50, deadline=None)
def test_weights_match_brute_force(seed):
    rng = random.Random(seed)
    g = valgraph.random_resolution_graph(rng, rng.randint(1, 8))
    betas = {a: F(rng.randint(1, 9), rng.randint(1, 4)) for a in g.arrows}
    for base in range(g.K + 1):
        assert valgraph.weights(g, base, betas) == valgraph.brute_force_weights(g, base, betas)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=50, deadline=None)
def test_pruning_gives_estimate(seed):
    rng = random.Random(seed)
    K = rng.randint(1, 8)
    g = valgraph.random_resolution_graph(rng, K, L=rng.randint(1, K))
    pruned = valgraph.prune_to_estimate2(g)
    assert valgraph.estimate2_holds(pruned)
    assert pruned.arrows <= g.arrows


def test_noether_fano():
    assert valgraph.noether_fano([1, 1], [2, 1], [3, 2], 1)
    assert not valgraph.noether_fano([1, 1], [2, 1], [1, 1], 1)


@given(st.integers(1, 9), st.lists(st.integers(1, 9), min_size=1, max_size=6),
       st.fractions(min_value=F(1, 10), max_value=50))
def test_quad_min_is_minimum(p0, ps, C):
    qm = valgraph.quad_min(p0, ps, C)
    # feasibility of the reported point
    assert p0 * qm.nu0 + sum(p * v for p, v in zip(ps, qm.nu_rest)) == C
    # any feasible perturbation does not go lower
    obj = lambda nu0, rest: 2 * p0 * nu0 ** 2 + sum(p * v * v for p, v in zip(ps, rest))
    assert obj(qm.nu0, qm.nu_rest) == qm.value
    shift = F(1, 7)
    rest = list(qm.nu_rest)
    rest[0] += shift
    nu0 = qm.nu0 - ps[0] * shift / p0
    assert obj(nu0, rest) >= qm.value


def test_quad_min_rejects_nonpositive():
    with pytest.raises(ValueError):
        valgraph.quad_min(0, [1], 1)
    with pytest.raises(ValueError):
        valgraph.quad_min(1, [1], 0)


def test_prop6_threshold_and_lhs():
    g = _chain(2, 1)
    # p = (1,1,1), deltas (2,2,1): (2+2+1)^2 / ((1/2+2) M)
    assert valgraph.prop6_threshold(g, 5) == F(25, 1) / (F(5, 2) * 5)
    assert valgraph.prop6_lhs(g, 4, 3, [2]) == F(2, 4) * 3 + 2
    with pytest.raises(ValueError):
        valgraph.prop6_lhs(g, 4, 3, [2, 1])


def test_coefficient_switch_on_chain():
    chk = valgraph.coefficient_switch_check(_chain(3, 1))
    assert chk.implies and chk.scale == 1


def test_upper_only_graph_rejected():
    g = _chain(2, 0)
    with pytest.raises(GraphError, match="upper-only"):
        valgraph.prune_to_estimate2(g)


def test_graph_file_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        g = valgraph.random_resolution_graph(rng, rng.randint(1, 6))
        assert valgraph.parse_graph(valgraph.format_graph(g)) == g


def test_graph_parse_errors():
    with pytest.raises(ParseError):
        valgraph.parse_graph("x y\n")
    with pytest.raises((ParseError, GraphError)):
        valgraph.parse_graph("1 0\n2 1\n1\n0 1\n")


def test_intersection_data_generation():
    rng = random.Random(8)
    for _ in range(30):
        K = rng.randint(1, 6)
        d = valgraph.random_intersection_data(rng, K, rng.randint(1, K))
        assert d.equalities_hold()
        lhs, rhs = d.aggregated_inequality()
        assert lhs >= rhs


# worked examples ----------------------------------------------------------------------


def test_two_paths_example():
    g = ResolutionGraph.build(2, 0, [2, 1, 1], [1, 1], [(2, 1), (2, 0), (1, 0)])
    assert valgraph.path_counts(g) == [2, 1, 1]


def test_single_arrow_weight_is_two_over_mu():
    g = ResolutionGraph.build(1, 1, [2, 2], [1], [(1, 0)])
    for mu in (3, 4, 7):
        assert valgraph.weights(g, 1, mu=mu)[0] == F(2, mu)


def test_prune_examples():
    g = ResolutionGraph.build(3, 2, [2, 2, 2, 1], [1, 1, 1], [(1, 0), (2, 1), (3, 2), (3, 0)])
    pruned = valgraph.prune_to_estimate2(g)
    assert (3, 0) not in pruned.arrows
    assert valgraph.path_counts(pruned) == [1, 1, 1, 1]
    clean = _chain(3, 2)
    assert valgraph.prune_to_estimate2(clean) == clean


def test_prune_property_many_samples():
    rng = random.Random(1000)
    for _ in range(1000):
        K = rng.randint(1, 7)
        g = valgraph.random_resolution_graph(rng, K, L=rng.randint(1, K))
        assert valgraph.estimate2_holds(valgraph.prune_to_estimate2(g))


def test_noether_fano_examples():
    # single node, delta_0 = 2, nu_0 = 2n + 1 with n = 1
    assert valgraph.noether_fano([1], [2], [3], 1)
    assert not valgraph.noether_fano([1, 1], [2, 1], [2, 1], 1)
    # the quad_min minimizer profile sits on the boundary, not beyond it
    p, delta, n = [1, 1], [2, 1], 1
    C = n * (p[0] * delta[0] + p[1] * delta[1])
    qm = valgraph.quad_min(p[0], p[1:], C)
    assert not valgraph.noether_fano(p, delta, [qm.nu0, *qm.nu_rest], n)


def test_quad_min_examples():
    assert valgraph.quad_min(2, [], 1).value == 1
    assert valgraph.quad_min(2, [1], 3).value == F(9, 2)
    qm = valgraph.quad_min(3, [1, 2], 5)
    assert qm.nu0 == qm.multiplier / 4 and all(v == qm.multiplier / 2 for v in qm.nu_rest)


def test_threshold_on_upper_only_graph_matches_closed_form():
    rng = random.Random(21)
    for _ in range(30):
        M = rng.randint(6, 15)
        mu = rng.randint(3, M - 3)
        K = rng.randint(1, 6)
        g = valgraph.random_resolution_graph(rng, K, L=0, delta0=M - mu - 1)
        p = valgraph.path_counts(g)
        per_degree = valgraph.prop6_threshold(g, M) / (F(2, mu) * p[0])
        assert per_degree == valgraph.upper_only_threshold(p[0], sum(p[1:]), mu, M)


def test_threshold_on_chain_by_hand():
    M, d0 = 9, 4
    g = ResolutionGraph.build(3, 0, [d0, 1, 1, 1], [1, 1, 1], [(1, 0), (2, 1), (3, 2)])
    assert valgraph.prop6_threshold(g, M) == F((d0 + 3) ** 2) / (F(7, 2) * M)


def test_e_divisor_bounds():
    assert valgraph.e_divisor_bound(3) == (F(2, 3), F(1, 2))
    assert valgraph.e_divisor_bound(4) == (F(1, 2), F(3, 8))
    for mu in range(3, 30):
        assert valgraph.e_chain_product(mu) == F(2 * mu, 3)
