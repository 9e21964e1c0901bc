"""Tests for the Jensen, relaxation and greedy bounds."""
import math

import networkx as nx
import pytest

from src.analysis.bounds import (greedy_upper_bound, jensen_subgraph_bound, jensen_whole_graph_bound,
                                 optimality_gap, relaxation_bound)
from src.analysis.random_analysis import derive_seed
from src.core.cost_model import CostFunction
from src.core.errors import InputError
from src.core.graph import Graph, degree_sequence, gen_random_connected
from src.solvers.exact import dp_optimal, nanip_oracle
from src.solvers.heuristics import greedy


def small_connected_graphs():
    graphs = [Graph.from_edges(h.number_of_nodes(), h.edges())
              for h in nx.graph_atlas_g()
              if 1 <= h.number_of_nodes() <= 6 and nx.is_connected(h)]
    for n in (7, 8):
        max_edges = n * (n - 1) // 2
        for i in range(100):
            m = (n - 1) + (i * 7919 + 100 * n) % (max_edges - n + 2)
            graphs.append(gen_random_connected(n, m, seed=100 * n + i))
    return graphs


def benchmark_graphs():
    return [gen_random_connected(15, m, derive_seed(42, m, i)) for m in (14, 35, 70, 105) for i in range(5)]


def budget_relaxation(g, f):
    """min sum f(p_i) s.t. sum p_i = m, 0 <= p_i <= d_i, by DP over the edge budget."""
    best = {0: 0.0}
    for d in g.degrees:
        nxt = {}
        for used, cost in best.items():
            for p in range(d + 1):
                total = used + p
                if total > g.m:
                    break
                value = cost + f(p)
                if value < nxt.get(total, math.inf):
                    nxt[total] = value
        best = nxt
    return best[g.m]


def test_jensen_subgraph_examples(cycle4, reciprocal):
    assert jensen_subgraph_bound(cycle4, [0, 1, 2], reciprocal) == pytest.approx(4 / 3, abs=1e-12)
    assert jensen_subgraph_bound(cycle4, [1], reciprocal) == reciprocal(2)
    g = Graph.from_edges(3, [(0, 1)])
    assert jensen_subgraph_bound(g, [2], reciprocal) == reciprocal(0)


def test_jensen_subgraph_rejects(cycle4, reciprocal):
    with pytest.raises(InputError):
        jensen_subgraph_bound(cycle4, [], reciprocal)
    with pytest.raises(InputError, match="bound requires decreasing convex f"):
        jensen_subgraph_bound(cycle4, [0], CostFunction.indicator())


def test_jensen_whole_graph_examples(cycle4, triangle, reciprocal):
    assert jensen_whole_graph_bound(cycle4, reciprocal) == pytest.approx(7 / 3, abs=1e-9)
    assert jensen_whole_graph_bound(triangle, reciprocal) == pytest.approx(11 / 6, abs=1e-9)
    assert jensen_whole_graph_bound(Graph.from_edges(1, []), reciprocal) == 1.0


def test_relaxation_path(path3, reciprocal):
    solution = relaxation_bound(path3, reciprocal)
    assert solution.s == 0
    assert solution.r is None
    assert sorted(solution.p_values) == [0, 1, 1]
    assert solution.bound == 2.0


def test_relaxation_cycle_with_pendant(cycle4_pendant, reciprocal):
    solution = relaxation_bound(cycle4_pendant, reciprocal)
    assert solution.s == 1
    assert solution.r == 0
    assert solution.p_values == [1, 1, 1, 1, 1]
    assert solution.bound == 2.5


def test_relaxation_triangle(triangle, reciprocal):
    solution = relaxation_bound(triangle, reciprocal)
    assert solution.s == 0
    assert solution.p_values == [1, 1, 1]
    assert solution.bound == 1.5


def test_relaxation_large_residual(reciprocal):
    # K_10 plus a pendant: the residual exceeds the tail length.
    edges = [(u, v) for u in range(10) for v in range(u + 1, 10)] + [(0, 10)]
    g = Graph.from_edges(11, edges)
    solution = relaxation_bound(g, reciprocal)
    assert (solution.s, solution.r) == (1, 35)
    assert sum(solution.p_values) == g.m
    assert all(p <= d for p, d in zip(solution.p_values, degree_sequence(g)))
    assert solution.bound == pytest.approx(budget_relaxation(g, reciprocal), abs=1e-9)


def test_relaxation_witness_is_feasible(reciprocal):
    for g in small_connected_graphs():
        solution = relaxation_bound(g, reciprocal)
        assert sum(solution.p_values) == g.m
        assert all(0 <= p <= d for p, d in zip(solution.p_values, degree_sequence(g)))


@pytest.mark.parametrize("cost", ["reciprocal1", "reciprocal12", "table"])
def test_relaxation_matches_budget_dp(cost, standard_costs):
    f = standard_costs[cost]
    graphs = small_connected_graphs() + (benchmark_graphs() if cost != "table" else [])
    for g in graphs:
        assert relaxation_bound(g, f).bound == pytest.approx(budget_relaxation(g, f), abs=1e-9)


def test_bound_sandwich_on_small_graphs(standard_costs):
    for g in small_connected_graphs():
        for name in ("reciprocal1", "reciprocal12", "table"):
            f = standard_costs[name]
            _, optimum = dp_optimal(g, nanip_oracle(g, f))
            assert relaxation_bound(g, f).bound <= optimum + 1e-9
            assert jensen_whole_graph_bound(g, f) <= optimum + 1e-9
            upper = greedy_upper_bound(g, f).bound
            for seed in range(3):
                realized = greedy(g, f, seed)[1].total
                assert optimum <= realized + 1e-9
                assert realized <= upper + 1e-9


def test_weakly_convex_matches_perturbed_limit():
    g = gen_random_connected(9, 20, seed=5)
    weak = CostFunction.table([10 - k for k in range(g.max_degree + 1)])
    eps = 1e-6
    perturbed = CostFunction.table([10 - k + eps ** (k + 1) for k in range(g.max_degree + 1)])
    assert relaxation_bound(g, weak).bound == pytest.approx(relaxation_bound(g, perturbed).bound, abs=1e-4)
    assert jensen_whole_graph_bound(g, weak) == pytest.approx(jensen_whole_graph_bound(g, perturbed), abs=1e-4)


def test_greedy_bound_star(star4, reciprocal):
    solution = greedy_upper_bound(star4, reciprocal)
    assert (solution.s, solution.q) == (3, 1)
    assert not solution.fallback
    assert solution.bound == 3.0


def test_greedy_bound_cycle(cycle4, reciprocal):
    solution = greedy_upper_bound(cycle4, reciprocal)
    assert (solution.s, solution.q) == (2, 2)
    assert solution.bound == pytest.approx(7 / 3, abs=1e-12)


def test_greedy_bound_witness(reciprocal):
    for g in small_connected_graphs():
        solution = greedy_upper_bound(g, reciprocal)
        if solution.fallback:
            continue
        d = degree_sequence(g)
        assert 1 <= solution.q <= d[solution.s + 1]
        assert solution.s + solution.q + sum(d[solution.s + 2:]) == g.m


def test_greedy_bound_small_graphs(reciprocal):
    edge = Graph.from_edges(2, [(0, 1)])
    solution = greedy_upper_bound(edge, reciprocal)
    assert solution.fallback
    assert solution.bound == 1.5
    assert greedy_upper_bound(Graph.from_edges(1, []), reciprocal).bound == 1.0


def test_single_node_needs_only_f0():
    node = Graph.from_edges(1, [])
    f = CostFunction.table([4.0])
    assert jensen_whole_graph_bound(node, f) == 4.0
    assert jensen_subgraph_bound(node, [0], f) == 4.0
    assert relaxation_bound(node, f).bound == 4.0
    assert greedy_upper_bound(node, f).bound == 4.0


def test_greedy_bound_rejects_disconnected(reciprocal):
    with pytest.raises(InputError, match="connected"):
        greedy_upper_bound(Graph.from_edges(4, [(0, 1), (2, 3)]), reciprocal)


def test_relaxation_rejects_non_convex(cycle4):
    with pytest.raises(InputError, match="bound requires decreasing convex f"):
        relaxation_bound(cycle4, CostFunction.table([1, 0.9, 0.5, 0.1]))


def test_optimality_gap():
    gap = optimality_gap(2.5, 2.0)
    assert gap["absolute"] == 0.5
    assert gap["ratio"] == 1.25
    assert optimality_gap(1.0, 0.0)["ratio"] == math.inf
