"""Lower bounds on the optimal installation cost and the greedy upper bound.

All bounds assume a decreasing convex f and reject anything else. Each
returns the scalar bound together with the witness it was built from, so
callers can inspect s, r, q and the relaxed assignment directly.
"""
from typing import Dict, Iterable, List, Optional
import logging

from pydantic import BaseModel

from ..core.cost_model import CostFunction, accumulate, interpolate, is_decreasing_convex
from ..core.errors import InputError
from ..core.graph import Graph, degree_sequence, is_connected

logger = logging.getLogger(__name__)


class RelaxationSolution(BaseModel):
    s: int
    r: Optional[int]
    level: int
    p_values: List[int]
    bound: float


class GreedyBoundSolution(BaseModel):
    s: Optional[int]
    q: Optional[int]
    fallback: bool
    bound: float


def _require_convex(f: CostFunction, D: int) -> None:
    if not is_decreasing_convex(f, D):
        raise InputError("bound requires decreasing convex f")


def _cut_counts(g: Graph, h_nodes: Iterable[int]):
    members = set(int(v) for v in h_nodes)
    if not members:
        raise InputError("subgraph node set must be non-empty")
    if any(not 0 <= v < g.n for v in members):
        raise InputError("subgraph node ids outside the graph")
    inner = 0
    cut = 0
    for u in members:
        for v in g.adjacency[u]:
            if v in members:
                inner += 1
            else:
                cut += 1
    return len(members), inner // 2, cut


def jensen_subgraph_bound(g: Graph, h_nodes: Iterable[int], f: CostFunction) -> float:
    """Cost of installing h_nodes once every other node is already in place.

    |V_H| * f((|E_H| + |E_GH|) / |V_H|), with f interpolated between integers.
    """
    size, inner, cut = _cut_counts(g, h_nodes)
    _require_convex(f, g.max_degree)
    return size * interpolate(f, (inner + cut) / size)


def jensen_whole_graph_bound(g: Graph, f: CostFunction) -> float:
    """f(0) + (n-1) * f(m / (n-1)): the first node pays f(0), the rest share m."""
    _require_convex(f, g.max_degree)
    if g.n == 0:
        return 0.0
    if g.n == 1:
        return f(0)
    return f(0) + (g.n - 1) * interpolate(f, g.m / (g.n - 1))


def relaxation_bound(g: Graph, f: CostFunction) -> RelaxationSolution:
    """Minimise sum f(p_i) s.t. sum p_i = m, 0 <= p_i <= d_i, integer p_i.

    The s lowest-degree nodes are saturated (p_i = d_i), and the remaining
    budget is spread as evenly as possible over the other n - s nodes.
    """
    _require_convex(f, g.max_degree)
    n, m = g.n, g.m
    if n == 0:
        return RelaxationSolution(s=0, r=None, level=0, p_values=[], bound=0.0)
    d = degree_sequence(g)

    s = 0
    r: Optional[int] = None
    prefix = 0
    if d[0] * n <= m:
        running = 0
        for k in range(1, n + 1):
            running += d[k - 1]
            # Feasibility is monotone in k, so the last feasible k is the max.
            if (n - k) * d[k - 1] + running <= m:
                s, prefix = k, running
            else:
                break
        r = m - (n - s) * d[s - 1] - prefix

    tail = n - s
    budget = m - prefix
    if tail:
        level, extra = divmod(budget, tail)
        p_values = d[:s] + [level] * (tail - extra) + [level + 1] * extra
    else:
        level = d[-1]
        p_values = list(d)

    bound = accumulate([f(p) for p in p_values])
    logger.debug(f"Relaxation bound s={s} r={r} level={level} bound={bound}")
    return RelaxationSolution(s=s, r=r, level=level, p_values=p_values, bound=bound)


def greedy_upper_bound(g: Graph, f: CostFunction) -> GreedyBoundSolution:
    """Worst-case cost of the greedy heuristic from the degree sequence.

    Takes the largest s with q = m - s - (d_{s+3} + ... + d_n) in
    1..d_{s+2}; bound = f(0) + s f(1) + f(q) + f(d_{s+3}) + ... + f(d_n).
    Falls back to f(0) + (n-1) f(1) when no such s exists.
    """
    _require_convex(f, g.max_degree)
    if not is_connected(g):
        raise InputError("greedy upper bound requires a connected graph")
    n, m = g.n, g.m
    if n == 0:
        return GreedyBoundSolution(s=None, q=None, fallback=True, bound=0.0)
    fallback = f(0) + (n - 1) * (f(1) if n > 1 else 0.0)
    if n < 3:
        return GreedyBoundSolution(s=None, q=None, fallback=True, bound=fallback)

    d = degree_sequence(g)
    # suffix[i] = d_{i+1} + ... + d_n in 1-based terms.
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + d[i]

    for s in range(n - 2, -1, -1):
        q = m - s - suffix[s + 2]
        if 1 <= q <= d[s + 1]:
            terms = [f(0)] + [f(1)] * s + [f(q)] + [f(k) for k in d[s + 2:]]
            return GreedyBoundSolution(s=s, q=q, fallback=False, bound=accumulate(terms))

    logger.info(f"No feasible (s, q) for n={n} m={m}; using the connected-graph bound")
    return GreedyBoundSolution(s=None, q=None, fallback=True, bound=fallback)


def optimality_gap(cost: float, lower_bound: float) -> Dict[str, float]:
    """Absolute and relative distance of a realised cost from a lower bound."""
    ratio = cost / lower_bound if lower_bound > 0 else float("inf")
    return {"absolute": cost - lower_bound, "ratio": ratio}
