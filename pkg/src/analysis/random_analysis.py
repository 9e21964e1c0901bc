"""Expected cost of a uniformly random sequence on an Erdos-Renyi graph."""
from typing import Tuple
import logging
import math

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import hyp2f1
from scipy.stats import binom

from ..core.cost_model import CostFunction, sequence_cost
from ..core.errors import InputError
from ..core.graph import check_seed, gen_gnp

logger = logging.getLogger(__name__)


class ErModel(BaseModel):
    n: int = Field(ge=1)
    p: float = Field(ge=0.0, le=1.0)


def _cost_values(model: ErModel, f: CostFunction) -> np.ndarray:
    return np.array(f.values_upto(model.n - 1), dtype=float)


def expected_cost_exact(model: ErModel, f: CostFunction) -> float:
    """sum_t sum_{k<t} C(t-1, k) p^k (1-p)^(t-1-k) f(k).

    The node installed at step t has Binomial(t-1, p) installed neighbours.
    """
    values = _cost_values(model, f)
    n, p = model.n, model.p
    if p == 0.0:
        return n * float(values[0])
    if p == 1.0:
        return float(values.sum())
    total = 0.0
    for t in range(1, n + 1):
        k = np.arange(t)
        total += float(np.dot(binom.pmf(k, t - 1, p), values[:t]))
    return total


def expected_cost_upper(model: ErModel, f: CostFunction) -> float:
    """(1/p) * sum_{k<n} f(k), valid for every p > 0."""
    if model.p == 0.0:
        raise InputError("the random-sequence upper bound needs p > 0")
    return float(_cost_values(model, f).sum()) / model.p


def expected_cost_hypergeometric(model: ErModel, f: CostFunction) -> float:
    """Closed form through 2F1(1, n+1; n+1-k; 1-p); a cross-check only.

    It subtracts two large quantities, so the direct sum is preferred.
    """
    n, p = model.n, model.p
    if not 0.0 < p < 1.0:
        return expected_cost_exact(model, f)
    values = _cost_values(model, f)
    upper = float(values.sum()) / p
    correction = 0.0
    for k in range(n):
        weight = math.comb(n, k) * p**k * (1 - p) ** (n - k)
        correction += values[k] * weight * hyp2f1(1, n + 1, n + 1 - k, 1 - p)
    return upper - float(correction)


def derive_seed(master_seed: int, *key: int) -> int:
    """Deterministic child seed for the given integer key path."""
    seq = np.random.SeedSequence(check_seed(master_seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def expected_cost_monte_carlo(model: ErModel, f: CostFunction, trials: int,
                              seed: int) -> Tuple[float, float]:
    """Mean and standard error of C over independent (graph, permutation) draws."""
    if trials < 1:
        raise InputError(f"need at least one trial, got {trials}")
    costs = np.empty(trials)
    for i in range(trials):
        g = gen_gnp(model.n, model.p, derive_seed(seed, i, 0))
        order = np.random.default_rng(derive_seed(seed, i, 1)).permutation(model.n)
        costs[i] = sequence_cost(g, f, order.tolist()).total
    mean = float(costs.mean())
    stderr = float(costs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    logger.info(f"Monte Carlo n={model.n} p={model.p}: mean={mean:.6f} se={stderr:.6f} ({trials} trials)")
    return mean, stderr
