"""Shared fixtures: small named graphs and the standard cost functions."""
from pathlib import Path

import pytest

from src.core.cost_model import CostFunction
from src.core.graph import Graph

COST_TABLE_PATH = Path(__file__).resolve().parents[1] / "data" / "costs" / "convex_table.txt"


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def cycle4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def cycle5():
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])


@pytest.fixture
def star4():
    """K_{1,4} with center 0."""
    return Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


@pytest.fixture
def cycle4_pendant():
    """4-cycle 0-1-2-3 with a pendant node 4 hanging off node 0."""
    return Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 4)])


@pytest.fixture
def k4():
    return Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def reciprocal():
    return CostFunction.reciprocal(1)


@pytest.fixture
def convex_table():
    with open(COST_TABLE_PATH, "r", encoding="utf-8") as f:
        return CostFunction.table(float(tok) for tok in f.read().split())


@pytest.fixture
def standard_costs(convex_table):
    """The cost functions every exactness check runs against."""
    return {
        "reciprocal1": CostFunction.reciprocal(1),
        "reciprocal12": CostFunction.reciprocal(12),
        "indicator": CostFunction.indicator(),
        "linear": CostFunction.linear(2, 1),
        "table": convex_table,
    }
