"""Heuristic sequences: cost-greedy, degree-descending and uniform random."""
from typing import Dict, List, Optional, Tuple
import logging

import numpy as np

from ..core.base_solver import BaseSolver
from ..core.cost_model import CostFunction, CostReport, InstallSequence, sequence_cost
from ..core.graph import Graph, check_seed

logger = logging.getLogger(__name__)


class _Buckets:
    """Uninstalled nodes grouped by installed-neighbour count.

    Each bucket is a list with a position index so removal is O(1) and the
    member order stays deterministic.
    """

    def __init__(self, n: int):
        self.members: Dict[int, List[int]] = {0: list(range(n))}
        self.where: List[int] = [0] * n
        self.pos: List[int] = list(range(n))

    def remove(self, v: int) -> None:
        bucket = self.members[self.where[v]]
        i = self.pos[v]
        last = bucket.pop()
        if last != v:
            bucket[i] = last
            self.pos[last] = i
        if not bucket:
            del self.members[self.where[v]]

    def add(self, v: int, r: int) -> None:
        bucket = self.members.setdefault(r, [])
        self.where[v] = r
        self.pos[v] = len(bucket)
        bucket.append(v)

    def bump(self, v: int) -> None:
        r = self.where[v]
        self.remove(v)
        self.add(v, r + 1)


def greedy(g: Graph, f: CostFunction, seed: int) -> Tuple[InstallSequence, CostReport]:
    """Install the cheapest uninstalled node at every step.

    The first node and every tie are drawn uniformly from the seeded
    generator.
    """
    rng = np.random.default_rng(check_seed(seed))
    n = g.n
    if n == 0:
        return (), CostReport(r_values=[], node_costs=[], total=0.0)
    table = f.values_upto(g.max_degree)
    buckets = _Buckets(n)
    installed = [False] * n
    sequence: List[int] = []

    u = int(rng.integers(n))
    while True:
        buckets.remove(u)
        installed[u] = True
        sequence.append(u)
        if len(sequence) == n:
            break
        for v in g.adjacency[u]:
            if not installed[v]:
                buckets.bump(v)

        best = min(table[r] for r in buckets.members)
        tied = [r for r in sorted(buckets.members) if table[r] == best]
        size = sum(len(buckets.members[r]) for r in tied)
        pick = int(rng.integers(size)) if size > 1 else 0
        for r in tied:
            bucket = buckets.members[r]
            if pick < len(bucket):
                u = bucket[pick]
                break
            pick -= len(bucket)

    return tuple(sequence), sequence_cost(g, f, sequence)


def degree_descending(g: Graph, f: CostFunction) -> Tuple[InstallSequence, CostReport]:
    """Highest degree first, ties by ascending node id."""
    sequence = tuple(sorted(range(g.n), key=lambda v: (-g.degrees[v], v)))
    return sequence, sequence_cost(g, f, sequence)


def random_sequence(g: Graph, f: CostFunction, seed: int) -> Tuple[InstallSequence, CostReport]:
    """Uniformly random permutation."""
    rng = np.random.default_rng(check_seed(seed))
    sequence = tuple(int(v) for v in rng.permutation(g.n))
    return sequence, sequence_cost(g, f, sequence)


class GreedySolver(BaseSolver):
    algorithm = "greedy"
    uses_seed = True

    def __init__(self, solver_id: str):
        super().__init__(solver_id, "CostGreedy")

    def _solve(self, g: Graph, f: CostFunction, seed: Optional[int]) -> Tuple[InstallSequence, CostReport]:
        return greedy(g, f, seed or 0)


class DegreeDescendingSolver(BaseSolver):
    algorithm = "degree"

    def __init__(self, solver_id: str):
        super().__init__(solver_id, "DegreeDescending")

    def _solve(self, g: Graph, f: CostFunction, seed: Optional[int]) -> Tuple[InstallSequence, CostReport]:
        return degree_descending(g, f)


class RandomSequenceSolver(BaseSolver):
    algorithm = "random"
    uses_seed = True

    def __init__(self, solver_id: str):
        super().__init__(solver_id, "RandomSequence")

    def _solve(self, g: Graph, f: CostFunction, seed: Optional[int]) -> Tuple[InstallSequence, CostReport]:
        return random_sequence(g, f, seed or 0)
