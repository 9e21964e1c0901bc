"""Tests for cost functions and sequence evaluation."""
import itertools

import numpy as np
import pytest

from src.core.cost_model import (CostFunction, installed_neighbor_counts, interpolate,
                                 is_decreasing_convex, parse_cost_spec, sequence_cost)
from src.core.errors import InputError
from src.core.graph import Graph, gen_gnp, gen_random_connected


def test_reciprocal_is_decreasing_convex(reciprocal):
    assert is_decreasing_convex(reciprocal, 5)
    assert reciprocal.is_decreasing(5)


def test_linear_table_is_weakly_convex():
    assert is_decreasing_convex(CostFunction.table([10, 9, 8, 7, 6, 5]), 5)


def test_indicator_is_not_decreasing_convex():
    f = CostFunction.indicator()
    assert not is_decreasing_convex(f, 3)
    assert not f.is_decreasing(3)


def test_concave_table_rejected():
    assert not is_decreasing_convex(CostFunction.table([10, 9.5, 8, 5]), 3)


def test_convex_sample_table(convex_table):
    assert convex_table.domain_max == 8
    assert is_decreasing_convex(convex_table, 8)


def test_interpolate_examples(reciprocal):
    assert interpolate(reciprocal, 1) == 0.5
    assert interpolate(reciprocal, 0) == 1.0
    assert interpolate(reciprocal, 4 / 3) == pytest.approx(4 / 9, abs=1e-12)
    assert reciprocal.interpolate(2.5) == pytest.approx((1 / 3 + 1 / 4) / 2, abs=1e-12)


def test_interpolate_rejects_beyond_table():
    f = CostFunction.table([3, 2, 1.5])
    assert interpolate(f, 2) == 1.5
    with pytest.raises(InputError):
        interpolate(f, 2.5)


def test_installed_neighbor_counts_path(path3):
    assert installed_neighbor_counts(path3, (0, 1, 2)) == [0, 1, 1]
    assert installed_neighbor_counts(path3, (0, 2, 1)) == [0, 0, 2]


def test_installed_neighbor_counts_star_center_first(star4):
    assert installed_neighbor_counts(star4, (0, 1, 2, 3, 4)) == [0, 1, 1, 1, 1]


@pytest.mark.parametrize("sigma", [(0, 1), (0, 1, 1), (0, 1, 3), ()])
def test_rejects_non_permutation(path3, sigma):
    with pytest.raises(InputError, match="permutation"):
        installed_neighbor_counts(path3, sigma)


def test_sequence_cost_examples(path3, triangle):
    report = sequence_cost(path3, CostFunction.reciprocal(12), (0, 1, 2))
    assert report.node_costs == [12.0, 6.0, 6.0]
    assert report.total == 24.0
    for sigma in itertools.permutations(range(3)):
        assert sequence_cost(triangle, CostFunction.linear(2, 1), sigma).total == 9.0


def test_single_node_costs_f0():
    g = Graph.from_edges(1, [])
    assert sequence_cost(g, CostFunction.reciprocal(7), (0,)).total == 7.0


def test_sequence_cost_rejects_short_table(k4):
    with pytest.raises(InputError, match="cost table"):
        sequence_cost(k4, CostFunction.table([3, 2, 1]), (0, 1, 2, 3))


def test_sequence_cost_is_pure(cycle4_pendant, reciprocal):
    assert sequence_cost(cycle4_pendant, reciprocal, (4, 0, 1, 2, 3)) == \
        sequence_cost(cycle4_pendant, reciprocal, (4, 0, 1, 2, 3))


def test_installed_counts_sum_to_edge_count():
    rng = np.random.default_rng(2024)
    for trial in range(1000):
        n = int(rng.integers(1, 16))
        g = gen_gnp(n, float(rng.random()), seed=trial)
        sigma = rng.permutation(n).tolist()
        counts = installed_neighbor_counts(g, sigma)
        assert sum(counts) == g.m
        assert sum(installed_neighbor_counts(g, sigma[::-1])) == g.m


def test_linear_cost_is_order_independent():
    rng = np.random.default_rng(7)
    f = CostFunction.linear(2, 1)
    for trial in range(100):
        n = int(rng.integers(2, 14))
        m = int(rng.integers(n - 1, n * (n - 1) // 2 + 1))
        g = gen_random_connected(n, m, seed=trial)
        sigma = rng.permutation(n).tolist()
        assert sequence_cost(g, f, sigma).total == 2 * g.m + g.n


@pytest.mark.parametrize("spec,expected", [
    ("reciprocal:1", CostFunction.reciprocal(1)),
    ("reciprocal:12", CostFunction.reciprocal(12)),
    ("linear:2,1", CostFunction.linear(2, 1)),
    ("indicator", CostFunction.indicator()),
])
def test_parse_cost_spec(spec, expected):
    assert parse_cost_spec(spec) == expected


def test_parse_cost_spec_table(tmp_path):
    (tmp_path / "f.txt").write_text("4 2 1\n0.5\n", encoding="utf-8")
    f = parse_cost_spec("table:f.txt", base_dir=tmp_path)
    assert f.values == (4.0, 2.0, 1.0, 0.5)
    assert parse_cost_spec(f"table:{tmp_path / 'f.txt'}") == f


@pytest.mark.parametrize("spec", ["cubic:1", "linear:1", "reciprocal:x", "table:/no/such/file", "indicator:2"])
def test_parse_cost_spec_rejects(spec):
    with pytest.raises(InputError):
        parse_cost_spec(spec)


def test_negative_values_rejected():
    with pytest.raises(InputError):
        CostFunction.table([1, -1])
    with pytest.raises(InputError):
        CostFunction.linear(-1, 1)(5)
