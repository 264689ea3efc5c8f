import numpy as np
import pytest

from oracles import bfs_components, is_cycle, stub_matching_outcomes
from qwalk.errors import GenerationError, ParameterError
from qwalk.graphs import (
    Graph,
    GraphModelParams,
    count_components,
    derive_seed,
    generate_complete,
    generate_complete_minus_m,
    generate_configuration,
    generate_cycle,
    generate_er,
    generate_model,
    make_rng,
    randomize_by_edge_interchange,
)


def assert_simple(g: Graph):
    for u, v in g.edges:
        assert u < v
        assert 0 <= u and v < g.n
    assert len(g.edge_array()) == len(set(map(tuple, g.edge_array().tolist())))


def test_graph_rejects_self_loops_and_out_of_range():
    with pytest.raises(ParameterError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(ParameterError):
        Graph(3, frozenset({(0, 3)}))
    with pytest.raises(ParameterError):
        Graph.from_pairs(3, [(0, 1), (1, 0)])


def test_er_extremes():
    assert generate_er(5, 0.0, make_rng(1)).num_edges == 0
    assert generate_er(2, 1.0, make_rng(1)).edges == {(0, 1)}
    with pytest.raises(ParameterError):
        generate_er(1, 0.5, make_rng(1))


def test_er_bit_reproducible():
    a = generate_er(60, 0.2, make_rng(123))
    b = generate_er(60, 0.2, make_rng(123))
    c = generate_er(60, 0.2, make_rng(124))
    assert a == b
    assert a != c
    assert_simple(a)


def test_er_mean_degree_over_ensemble():
    n, p = 100, 10 / 99
    means = np.array([generate_er(n, p, make_rng(derive_seed(99, r))).mean_degree()
                      for r in range(1000)])
    se = means.std(ddof=1) / np.sqrt(means.size)
    assert abs(means.mean() - 10) < 0.1
    assert abs(means.mean() - 10) < 3 * se


def test_configuration_triangle():
    g = generate_configuration(3, 2, make_rng(0))
    assert g.edges == {(0, 1), (1, 2), (0, 2)}


def test_configuration_four_nodes_is_cycle():
    # Oracle: every simple outcome of every stub matching on 4 nodes of degree 2 is a 4-cycle.
    simple = [m for m in stub_matching_outcomes(4, 2)
              if all(u != v for u, v in m) and len(set(m)) == len(m)]
    assert simple and all(is_cycle(4, m) for m in simple)
    for strategy in ("pairing", "reject"):
        for seed in range(20):
            g = generate_configuration(4, 2, make_rng(seed), strategy=strategy)
            assert is_cycle(4, sorted(g.edges))


def test_configuration_odd_stub_count():
    with pytest.raises(ParameterError, match="even"):
        generate_configuration(5, 3, make_rng(0))


@pytest.mark.parametrize("n,k", [(100, 10), (100, 30), (60, 50), (100, 99), (31, 4)])
def test_configuration_is_regular_and_simple(n, k):
    g = generate_configuration(n, k, make_rng(derive_seed(5, n, k)))
    assert_simple(g)
    assert np.all(g.degrees() == k)


def test_configuration_retry_cap():
    with pytest.raises(GenerationError) as info:
        generate_configuration(20, 12, make_rng(0), strategy="reject", max_attempts=5)
    assert info.value.attempts == 5


def test_edge_interchange_identity_and_invariance():
    c4 = generate_cycle(4)
    assert randomize_by_edge_interchange(c4, 0, make_rng(0)) == c4
    out = randomize_by_edge_interchange(c4, 10_000, make_rng(0))
    assert list(out.degrees()) == [2, 2, 2, 2]
    g = generate_er(100, 0.1, make_rng(7))
    h = randomize_by_edge_interchange(g, 10 * g.num_edges, make_rng(8))
    assert_simple(h)
    assert np.array_equal(g.degrees(), h.degrees())
    assert h != g


def test_complete_minus_m():
    assert generate_complete_minus_m(100, 0, make_rng(0)).num_edges == 4950
    assert generate_complete_minus_m(4, 6, make_rng(0)).num_edges == 0
    g = generate_complete_minus_m(100, 200, make_rng(3))
    assert g.num_edges == 4750
    assert_simple(g)
    with pytest.raises(ParameterError):
        generate_complete_minus_m(4, 7, make_rng(0))


def test_deterministic_generators():
    assert generate_cycle(4).edges == {(0, 1), (1, 2), (2, 3), (0, 3)}
    assert generate_complete(2).edges == {(0, 1)}
    assert generate_complete(100).num_edges == 4950


def test_component_counter_matches_bfs():
    for seed in range(30):
        g = generate_er(40, 0.04, make_rng(seed))
        assert count_components(g) == bfs_components(g.n, sorted(g.edges))


def test_require_connected_resamples():
    params = GraphModelParams("er", 30, p=0.08, seed=1).validate()
    counts = []
    for s in range(20):
        g, resamples = generate_model(params, derive_seed(1, s), require_connected=True)
        assert count_components(g) == 1
        counts.append(resamples)
    assert max(counts) > 0


def test_params_validation():
    with pytest.raises(ParameterError):
        GraphModelParams("er", 10, p=0.0).validate()
    with pytest.raises(ParameterError):
        GraphModelParams("config", 10, k=10).validate()
    with pytest.raises(ParameterError):
        GraphModelParams("complete-minus-m", 4, m=7).validate()
    with pytest.raises(ParameterError):
        GraphModelParams("nope", 4).validate()


def test_derived_seeds_independent_of_order():
    a = [derive_seed(42, r) for r in range(5)]
    b = [derive_seed(42, r) for r in reversed(range(5))][::-1]
    assert a == b
    assert len(set(a)) == 5
