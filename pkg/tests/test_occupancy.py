"""Tests for local occupancy verification, closed-form pairs and the numeric search."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from local_occupancy.errors import CapExceededError, DomainError, RegimeError
from local_occupancy.graph import (
    Graph,
    complete,
    complete_bipartite,
    cycle,
    erdos_renyi,
    generate,
    max_average_degree,
    random_triangle_free,
)
from local_occupancy.hardcore import (
    evaluate_z,
    evaluate_z_prime,
    independence_polynomial,
    occupancy_fraction,
)
from local_occupancy.occupancy import (
    OccupancyParams,
    _strong_tables,
    clique_envelopes,
    clique_params,
    clique_threshold,
    clique_zeta,
    fractional_budgets,
    hall_beta_from_gamma,
    hall_params,
    mad_beta_from_gamma,
    mad_envelope,
    mad_params,
    numeric_param_search,
    params_for_setting,
    params_from_local_mad,
    triangle_free_params,
    verify_large_partition_functions,
    verify_local_occupancy,
)
from local_occupancy.sparsity import Clique, HallRatio, TriangleFree


def test_params_validation():
    """Test shape and positivity checks on certificates."""
    with pytest.raises(ValidationError):
        OccupancyParams(lam=1.0, beta=[1.0], gamma=[1.0, 1.0])
    with pytest.raises(ValidationError):
        OccupancyParams(lam=1.0, beta=[-1.0], gamma=[1.0])
    params = OccupancyParams.uniform(3, 1.0, 2.0, 0.5)
    assert params.budget(0, 4) == 4.0


def test_c5_triangle_free_certificate_verifies(c5):
    """Test the triangle-free pair holds on every induced neighbourhood subgraph of C5."""
    params = params_for_setting(c5, TriangleFree(), 1.0, strong=False)
    report = verify_local_occupancy(c5, params)
    assert report.verified
    assert report.min_gap >= -report.tolerance
    assert report.vertices_checked == 5
    assert report.subgraphs_checked == 20


def test_random_triangle_free_verifies_in_strong_mode():
    """Test the triangle-free pair on a random triangle-free graph, all subgraphs."""
    g = random_triangle_free(14, 0.4, seed=2)
    report = verify_local_occupancy(g, params_for_setting(g, TriangleFree(), 1.0))
    assert report.strong
    assert report.verified


def test_k4_fails_with_triangle_witness():
    """Test K4 under the triangle-free pair: the K3 neighbourhood is the witness."""
    g = complete(4)
    choice = mad_params(0.0, 3, 1.0)
    params = OccupancyParams.uniform(4, 1.0, choice.beta, choice.gamma)
    report = verify_local_occupancy(g, params)
    assert not report.verified
    assert report.witness.vertex == 0
    assert report.witness.vertices == [1, 2, 3]
    assert len(report.witness.edges) == 3
    assert report.min_gap == pytest.approx(report.witness.gap)
    assert report.min_gap < -0.05


def test_verification_caps():
    """Test the induced and strong-mode caps."""
    g = complete(8)
    weak = OccupancyParams.uniform(8, 1.0, 10.0, 10.0)
    with pytest.raises(CapExceededError):
        verify_local_occupancy(g, weak, induced_cap=5)
    strong = OccupancyParams.uniform(8, 1.0, 10.0, 10.0, strong=True)
    with pytest.raises(CapExceededError, match="strong-mode cap"):
        verify_local_occupancy(g, strong, edge_cap=5)


def test_params_must_match_graph(c5):
    """Test a certificate for the wrong vertex count is rejected."""
    with pytest.raises(DomainError):
        verify_local_occupancy(c5, OccupancyParams.uniform(4, 1.0, 1.0, 1.0))


def test_threaded_verification_matches_serial(petersen_graph):
    """Test jobs > 1 gives the same report."""
    params = params_for_setting(petersen_graph, TriangleFree(), 2.0)
    assert verify_local_occupancy(petersen_graph, params, jobs=3) == verify_local_occupancy(
        petersen_graph, params)


@pytest.mark.parametrize("a", [0.0, 1.0, 2.5])
@pytest.mark.parametrize("lam", [0.5, 1.0, 4.0])
def test_mad_params_identities(a, lam):
    """Test budget = beta + gamma d and that beta is the least one for its gamma."""
    d = 50.0
    choice = mad_params(a, d, lam)
    assert choice.budget == pytest.approx(choice.beta + choice.gamma * d, rel=1e-12)
    assert choice.beta == pytest.approx(mad_beta_from_gamma(choice.gamma, a, lam), rel=1e-10)
    y_star = choice.details["yStar"]
    assert mad_envelope(y_star, choice.beta, choice.gamma, a, lam) >= 1 - 1e-9


def test_triangle_free_matches_mad_zero():
    """Test the triangle-free pair is the a = 0 mad pair."""
    for delta in [3, 10, 1000]:
        tf = triangle_free_params(delta, 1.0)
        mad = mad_params(0.0, delta, 1.0)
        assert tf.beta == pytest.approx(mad.beta, rel=1e-10)
        assert tf.gamma == pytest.approx(mad.gamma, rel=1e-10)
        assert tf.budget == pytest.approx(mad.budget, rel=1e-10)


def test_triangle_free_budget_growth():
    """Test the budget behaves like Delta / log Delta for large Delta."""
    delta = 1e8
    budget = triangle_free_params(delta, 1.0).budget
    assert 1.0 < budget / (delta / math.log(delta)) < 2.5


def test_hall_params_identities():
    """Test the Hall pair against its beta(gamma) form and its budget."""
    choice = hall_params(1.5, 40.0, 1.0)
    k = choice.details["k"]
    assert choice.budget == pytest.approx(choice.beta + choice.gamma * 40.0, rel=1e-12)
    assert choice.beta == pytest.approx(hall_beta_from_gamma(choice.gamma, k, 1.0), rel=1e-10)
    with pytest.raises(DomainError):
        hall_params(0.5, 40.0, 1.0)


def test_clique_threshold_and_params():
    """Test the clique threshold gate and that the cheaper candidate is returned."""
    assert clique_zeta(3.0) == pytest.approx(0.5)
    d0 = clique_threshold(4, 1.0, 0.5)
    assert d0 >= 1.0
    with pytest.raises(RegimeError):
        clique_params(4, d0 * 0.5, 1.0, 0.5)
    choice = clique_params(4, d0 * 2, 1.0, 0.5)
    assert choice.variant in {"log", "sqrt"}
    assert choice.budget == pytest.approx(
        min(choice.details["logBudget"], choice.details["sqrtBudget"]))
    with pytest.raises(DomainError):
        clique_threshold(2, 1.0, 0.5)
    with pytest.raises(DomainError):
        params_for_setting(complete(3), Clique(omega=3), 1.0, xi=0.0)


def test_petersen_search_budget(petersen_graph):
    """Test the searched per-vertex budget on Petersen at lam=1 is 14/3."""
    params = numeric_param_search(petersen_graph, 1.0, d=3)
    for u in range(petersen_graph.n):
        assert params.budget(u, 3) == pytest.approx(14 / 3, rel=1e-6)
        assert params.gamma[u] == pytest.approx(2 / 3, rel=1e-5)
    assert verify_local_occupancy(petersen_graph, params).verified


def test_search_never_beats_closed_form(c5):
    """Test the searched budget is at most the triangle-free closed form."""
    searched = numeric_param_search(c5, 1.0, d=2)
    closed = triangle_free_params(2, 1.0)
    assert searched.budget(0, 2) <= closed.budget * (1 + 1e-9)


def test_local_mad_params_verify(petersen_graph):
    """Test exact local mad pairs verify in strong mode."""
    params = params_from_local_mad(petersen_graph, 1.0)
    assert params.strong
    assert verify_local_occupancy(petersen_graph, params).verified


def test_fractional_budgets(c5):
    """Test c_u = beta_u + gamma_u deg(u)."""
    params = OccupancyParams.uniform(5, 1.0, 1.0, 1.0)
    assert fractional_budgets(c5, params) == [3.0] * 5


def test_large_partition_functions(petersen_graph):
    """Test the Z_F threshold check over large induced neighbourhood subgraphs."""
    ok, where, smallest = verify_large_partition_functions(petersen_graph, 1.0, 2, 4.0)
    assert ok and where is None
    assert smallest == 4.0
    ok, where, _ = verify_large_partition_functions(petersen_graph, 1.0, 2, 5.0)
    assert not ok and where == 0


@pytest.mark.parametrize("omega", [3, 4, 6])
@pytest.mark.parametrize("lam", [0.5, 1.0])
def test_clique_candidates_are_stationary(omega, lam):
    """Test each candidate envelope touches 1 at z* with zero slope, before the 1/(1-zeta) scaling."""
    d = 50 * clique_threshold(omega, lam, 0.5)
    choice = clique_params(omega, d, lam, 0.5)
    zeta = choice.details["zeta"]
    for index, name in enumerate(["log", "sqrt"]):
        beta = choice.details[f"{name}Beta"] * (1 - zeta)
        gamma = choice.details[f"{name}Gamma"] * (1 - zeta)
        z = choice.details[f"{name}ZStar"]

        def g(x):
            return clique_envelopes(x, beta, gamma, omega, lam, zeta)[index]

        h = 1e-5 * z
        assert g(z) == pytest.approx(1.0, abs=1e-8)
        assert (g(z + h) - g(z - h)) / (2 * h) == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("omega", [3, 4, 6])
@pytest.mark.parametrize("lam", [0.5, 1.0])
@pytest.mark.parametrize("scale", [1.0, 10.0, 1e4])
def test_clique_budget_within_squared_inflation(omega, lam, scale):
    """Test budget <= (1+xi)^2 min{(omega-2) d loglog d / log d, 2d sqrt(log(omega-1)/log d)}."""
    xi = 0.5
    d = scale * max(clique_threshold(omega, lam, xi), 100.0)
    log_d = math.log(d)
    target = min((omega - 2) * d * math.log(log_d) / log_d,
                 2 * d * math.sqrt(math.log(omega - 1) / log_d))
    assert clique_params(omega, d, lam, xi).budget <= (1 + xi) ** 2 * target


def _triangle_free_corpus():
    yield cycle(5)
    yield cycle(8)
    yield generate("petersen()")
    yield complete_bipartite(4, 5)
    for seed in range(3):
        yield random_triangle_free(16, 0.5, seed=seed)
    yield random_triangle_free(20, 0.5, seed=7)


def _assert_occupancy_floor(g, params):
    """A verified uniform certificate forces occupancy >= 1/(beta + gamma Delta)."""
    budget = params.beta[0] + params.gamma[0] * g.max_degree
    fraction = float(occupancy_fraction(g, Fraction(params.lam)))
    assert fraction >= 1 / budget * (1 - 1e-9)


@pytest.mark.parametrize("graph_index", range(8))
@pytest.mark.parametrize("lam_kind", ["small", "log", "one"])
def test_triangle_free_closed_form_verifies_strongly(graph_index, lam_kind):
    """Test the triangle-free pair on every subgraph of every neighbourhood."""
    g = list(_triangle_free_corpus())[graph_index]
    lam = {"small": 0.1, "log": 1 / math.log(max(g.max_degree, 3)), "one": 1.0}[lam_kind]
    params = params_for_setting(g, TriangleFree(), lam)
    report = verify_local_occupancy(g, params)
    assert report.strong
    assert report.verified
    _assert_occupancy_floor(g, params)


@pytest.mark.parametrize("lam", [0.25, 1.0, 3.0])
def test_hall_ratio_one_verifies_on_triangle_free_graphs(lam):
    """Test rho = 1 certificates hold where every neighbourhood is edgeless."""
    for g in _triangle_free_corpus():
        params = params_for_setting(g, HallRatio(rho=1.0), lam)
        assert verify_local_occupancy(g, params).verified
        _assert_occupancy_floor(g, params)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=8), st.floats(min_value=0.1, max_value=0.9),
       st.integers(min_value=0, max_value=10_000), st.sampled_from([0.25, 1.0, 4.0]))
def test_mad_pair_verifies_under_its_own_exponent(n, p, seed, lam):
    """Test mad_params(a) holds strongly when every neighbourhood has mad at most a."""
    g = erdos_renyi(n, p, seed)
    a = max((float(max_average_degree(g.induced(g.adjacency[u])))
             for u in range(g.n) if g.degree(u)), default=0.0)
    choice = mad_params(a, max(g.max_degree, 1), lam)
    params = OccupancyParams.uniform(g.n, lam, choice.beta, choice.gamma, strong=True)
    assert verify_local_occupancy(g, params).verified
    _assert_occupancy_floor(g, params)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=9), st.floats(min_value=0.1, max_value=0.9),
       st.integers(min_value=0, max_value=10_000), st.sampled_from([0.0, 1.0, 2.0]),
       st.sampled_from([0.5, 1.0, 2.0]))
def test_verified_certificate_bounds_occupancy(n, p, seed, a, lam):
    """Test any verified uniform pair bounds the occupancy fraction from below."""
    g = erdos_renyi(n, p, seed)
    choice = mad_params(a, max(g.max_degree, 1), lam)
    params = OccupancyParams.uniform(g.n, lam, choice.beta, choice.gamma)
    if verify_local_occupancy(g, params).verified:
        _assert_occupancy_floor(g, params)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_strong_tables_list_each_subgraph_once_with_exact_values(lam):
    """Test strong tables hold one row per (edge set, size) pair with the right Z and lam Z'."""
    nb = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3)])
    edges = nb.edges()
    tables = list(_strong_tables(nb, lam))
    assert len(tables[0].z) == 1 << len(edges)
    assert all(len(t.z) < 1 << len(edges) for t in tables[1:])

    seen = set()
    for table in tables:
        assert len(table.z) == len(table.y)
        for index in range(len(table.z)):
            members, chosen = table.describe(index)
            assert {v for edge in chosen for v in edge} <= set(members)
            seen.add((frozenset(chosen), len(members)))
            relabel = {v: i for i, v in enumerate(members)}
            sub = Graph.from_edges(len(members), [(relabel[a], relabel[b]) for a, b in chosen])
            poly = independence_polynomial(sub)
            assert table.z[index] == pytest.approx(evaluate_z(poly, lam), rel=1e-12)
            assert table.y[index] == pytest.approx(lam * evaluate_z_prime(poly, lam),
                                                   rel=1e-12, abs=1e-12)

    expected = 0
    for mask in range(1 << len(edges)):
        used = {v for j, edge in enumerate(edges) if mask >> j & 1 for v in edge}
        expected += nb.n - len(used) + 1
    assert len(seen) == expected == sum(len(t.z) for t in tables)
