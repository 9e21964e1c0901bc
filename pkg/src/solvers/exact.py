"""Exact solvers: subset dynamic programming and a factorial oracle."""
from typing import Callable, FrozenSet, List, Optional, Tuple
import logging
import math

import numpy as np

from ..core.base_solver import BaseSolver
from ..core.cost_model import CostFunction, CostReport, InstallSequence, sequence_cost
from ..core.errors import SizeGuardError
from ..core.graph import Graph

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 10
DP_LIMIT = 26
# Relative slack under which two permutation costs count as a tie.
TIE_RTOL = 1e-12

# c(u, S): cost of installing u right after the node set S (given as a bitmask).
# Must depend on S only, never on the order S was installed in.
SubgraphCostOracle = Callable[[int, int], float]


class NanipOracle:
    """c(u, S) = f(|N(u) & S|), plus a batched form over arrays of masks."""

    def __init__(self, g: Graph, f: CostFunction):
        self.table = f.values_upto(g.max_degree)
        self.masks = g.neighbor_masks
        self._values = np.asarray(self.table, dtype=np.float64)

    def __call__(self, u: int, installed: int) -> float:
        return self.table[(self.masks[u] & installed).bit_count()]

    def batch(self, u: int, installed: np.ndarray, popcount: np.ndarray) -> np.ndarray:
        return self._values[popcount[installed & self.masks[u]]]


def nanip_oracle(g: Graph, f: CostFunction) -> NanipOracle:
    return NanipOracle(g, f)


def set_oracle(fn: Callable[[int, FrozenSet[int]], float]) -> SubgraphCostOracle:
    """Adapt a c(u, S) written over node sets to the bitmask convention."""
    def cost(u: int, installed: int) -> float:
        members = frozenset(v for v in range(installed.bit_length()) if (installed >> v) & 1)
        return fn(u, members)

    return cost


def _guard(g: Graph, limit: int, what: str) -> None:
    if g.n > limit:
        raise SizeGuardError(f"{what} is limited to n <= {limit}, graph has n={g.n}")


def _popcounts(n: int) -> np.ndarray:
    counts = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        counts[1 << i:2 << i] = counts[:1 << i] + 1
    return counts


def _batch_costs(oracle: SubgraphCostOracle, u: int, installed: np.ndarray,
                 popcount: np.ndarray) -> np.ndarray:
    batch = getattr(oracle, "batch", None)
    if batch is not None:
        return batch(u, installed, popcount)
    return np.fromiter((oracle(u, int(S)) for S in installed), dtype=np.float64,
                       count=installed.size)


def brute_force_optimal(g: Graph, f: CostFunction,
                        max_nodes: int = BRUTE_FORCE_LIMIT) -> Tuple[InstallSequence, float]:
    """Minimum C_G(sigma) by enumerating every permutation.

    Permutations are visited in lexicographic order and a later one replaces
    the incumbent only when it is cheaper by more than TIE_RTOL (relative), so
    the lexicographically smallest optimum wins whatever order the float sums
    round in. A branch is cut once its partial cost plus the cheapest value
    every remaining node could still pay reaches the incumbent.
    """
    _guard(g, max_nodes, "brute force")
    n = g.n
    if n == 0:
        return (), 0.0
    table = f.values_upto(g.max_degree)
    masks = g.neighbor_masks
    floors = [min(table[:g.degrees[v] + 1]) for v in range(n)]
    best_cost = math.inf
    best_order: List[int] = []
    order: List[int] = []

    def extend(installed: int, cost: float, floor_left: float) -> None:
        nonlocal best_cost, best_order
        if len(order) == n:
            if best_cost == math.inf or cost < best_cost - TIE_RTOL * max(1.0, abs(best_cost)):
                best_cost = cost
                best_order = list(order)
            return
        if best_cost != math.inf and cost + floor_left >= best_cost:
            return
        for u in range(n):
            bit = 1 << u
            if installed & bit:
                continue
            order.append(u)
            extend(installed | bit, cost + table[(masks[u] & installed).bit_count()],
                   floor_left - floors[u])
            order.pop()

    extend(0, 0.0, math.fsum(floors))
    return tuple(best_order), best_cost


def dp_optimal(g: Graph, oracle: SubgraphCostOracle,
               max_nodes: int = DP_LIMIT) -> Tuple[InstallSequence, float]:
    """Optimal sequence by dynamic programming over installed subsets.

    best[T] is the cheapest way to install exactly the nodes of T. Layers are
    filled in order of |T|, one vectorised pass per last node u; a strict
    comparison over ascending u keeps the smaller last node on ties. The
    predecessor array then walks back from the full set.
    """
    _guard(g, max_nodes, "subset dynamic programming")
    n = g.n
    if n == 0:
        return (), 0.0

    popcount = _popcounts(n)
    best = np.full(1 << n, np.inf, dtype=np.float64)
    best[0] = 0.0
    pred = np.full(1 << n, -1, dtype=np.int8)

    for t in range(1, n + 1):
        layer = np.flatnonzero(popcount == t)
        for u in range(n):
            bit = 1 << u
            targets = layer[(layer & bit) != 0]
            before = targets ^ bit
            cand = best[before] + _batch_costs(oracle, u, before, popcount)
            better = cand < best[targets]
            best[targets[better]] = cand[better]
            pred[targets[better]] = u
        logger.debug(f"DP layer {t}: {layer.size} subsets")

    full = (1 << n) - 1
    total = float(best[full])
    sequence = []
    S = full
    while S:
        u = int(pred[S])
        sequence.append(u)
        S ^= 1 << u
    sequence.reverse()
    return tuple(sequence), total


def independence_number_check(g: Graph, max_nodes: int = DP_LIMIT) -> int:
    """alpha(G) as n minus the optimal cost under the 0/1 indicator cost."""
    _, cost = dp_optimal(g, nanip_oracle(g, CostFunction.indicator()), max_nodes=max_nodes)
    return g.n - int(round(cost))


class DpSolver(BaseSolver):
    algorithm = "dp"

    def __init__(self, solver_id: str, size_limit: int = DP_LIMIT):
        super().__init__(solver_id, "SubsetDP", size_limit)

    def _solve(self, g: Graph, f: CostFunction, seed: Optional[int]) -> Tuple[InstallSequence, CostReport]:
        sequence, total = dp_optimal(g, nanip_oracle(g, f), max_nodes=self.size_limit)
        report = sequence_cost(g, f, sequence)
        if report.total != total:
            logger.warning(f"DP total {total} differs from re-evaluated cost {report.total}")
        return sequence, report


class BruteForceSolver(BaseSolver):
    algorithm = "brute"

    def __init__(self, solver_id: str, size_limit: int = BRUTE_FORCE_LIMIT):
        super().__init__(solver_id, "BruteForce", size_limit)

    def _solve(self, g: Graph, f: CostFunction, seed: Optional[int]) -> Tuple[InstallSequence, CostReport]:
        sequence, _ = brute_force_optimal(g, f, max_nodes=self.size_limit)
        return sequence, sequence_cost(g, f, sequence)
