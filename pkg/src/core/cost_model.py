"""Cost functions f and evaluation of installation sequences."""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
import logging
import math

from pydantic import BaseModel

from .errors import InputError
from .graph import Graph

logger = logging.getLogger(__name__)

InstallSequence = Tuple[int, ...]

# Relative slack for the monotonicity/convexity comparisons.
_CLASSIFY_RTOL = 1e-12


@dataclass(frozen=True)
class CostFunction:
    """f: {0..D} -> R+, either tabulated or one of the closed forms.

    kind is one of "table", "reciprocal" (a/(1+k)), "linear" (a*k+b) and
    "indicator" (0 at k=0, 1 elsewhere).
    """
    kind: str
    a: float = 0.0
    b: float = 0.0
    values: Tuple[float, ...] = ()

    @classmethod
    def table(cls, values: Sequence[float]) -> "CostFunction":
        vals = tuple(float(v) for v in values)
        if not vals:
            raise InputError("cost table must hold at least f(0)")
        if any(v < 0 or math.isnan(v) for v in vals):
            raise InputError("cost table values must be non-negative")
        return cls("table", values=vals)

    @classmethod
    def reciprocal(cls, a: float = 1.0) -> "CostFunction":
        if a < 0:
            raise InputError(f"reciprocal cost needs a >= 0, got {a}")
        return cls("reciprocal", a=float(a))

    @classmethod
    def linear(cls, a: float, b: float) -> "CostFunction":
        if b < 0:
            raise InputError(f"linear cost needs f(0) = b >= 0, got {b}")
        return cls("linear", a=float(a), b=float(b))

    @classmethod
    def indicator(cls) -> "CostFunction":
        return cls("indicator")

    @property
    def domain_max(self) -> Optional[int]:
        """Largest supported argument D; None when unbounded."""
        if self.kind == "table":
            return len(self.values) - 1
        return None

    def __call__(self, k: int) -> float:
        if k < 0:
            raise InputError(f"cost argument must be non-negative, got {k}")
        if self.kind == "table":
            if k >= len(self.values):
                raise InputError(f"cost table covers 0..{len(self.values) - 1}, asked for f({k})")
            return self.values[k]
        if self.kind == "reciprocal":
            return self.a / (1 + k)
        if self.kind == "linear":
            value = self.a * k + self.b
            if value < 0:
                raise InputError(f"linear cost is negative at k={k}")
            return value
        if self.kind == "indicator":
            return 0.0 if k == 0 else 1.0
        raise InputError(f"unknown cost kind {self.kind!r}")

    def check_domain(self, max_arg: int) -> None:
        D = self.domain_max
        if D is not None and D < max_arg:
            raise InputError(f"cost table covers 0..{D} but arguments up to {max_arg} are needed")

    def values_upto(self, max_arg: int) -> List[float]:
        """f(0..max_arg) as a list; rejects tables that are too short."""
        self.check_domain(max_arg)
        return [self(k) for k in range(max_arg + 1)]

    def interpolate(self, q: float) -> float:
        return interpolate(self, q)

    def is_decreasing(self, D: int) -> bool:
        vals = self.values_upto(D)
        tol = _CLASSIFY_RTOL * max(1.0, abs(vals[0]))
        return all(vals[i] + tol >= vals[i + 1] for i in range(D))

    def is_decreasing_convex(self, D: int) -> bool:
        return is_decreasing_convex(self, D)


class CostReport(BaseModel):
    """Per-step installed-neighbour counts and costs of one sequence."""
    r_values: List[int]
    node_costs: List[float]
    total: float


def is_decreasing_convex(f: CostFunction, D: int) -> bool:
    """f non-increasing with non-increasing successive drops on 0..D."""
    if D <= 0:
        f.check_domain(max(D, 0))
        return True
    vals = f.values_upto(D)
    tol = _CLASSIFY_RTOL * max(1.0, abs(vals[0]))
    drops = [vals[i] - vals[i + 1] for i in range(D)]
    if any(d < -tol for d in drops):
        return False
    return all(drops[i] + tol >= drops[i + 1] for i in range(D - 1))


def is_convex(f: CostFunction, D: int) -> bool:
    """Successive differences f(k+1) - f(k) non-decreasing on 0..D."""
    if D <= 1:
        f.check_domain(max(D, 0))
        return True
    vals = f.values_upto(D)
    tol = _CLASSIFY_RTOL * max(1.0, abs(vals[0]))
    return all(vals[i + 1] - vals[i] <= vals[i + 2] - vals[i + 1] + tol for i in range(D - 1))


def interpolate(f: CostFunction, q: float) -> float:
    """Piecewise-linear extension of f to real arguments."""
    if q < 0:
        raise InputError(f"interpolation argument must be non-negative, got {q}")
    D = f.domain_max
    if D is not None and q > D:
        raise InputError(f"interpolation argument {q} beyond cost domain 0..{D}")
    lo = math.floor(q)
    frac = q - lo
    if frac == 0:
        return f(lo)
    return f(lo) + frac * (f(lo + 1) - f(lo))


def check_permutation(g: Graph, sigma: Sequence[int]) -> InstallSequence:
    order = tuple(int(v) for v in sigma)
    if len(order) != g.n or sorted(order) != list(range(g.n)):
        raise InputError(f"sequence is not a permutation of the {g.n} nodes")
    return order


def installed_neighbor_counts(g: Graph, sigma: Sequence[int]) -> List[int]:
    """r(v_t, G, sigma) for every install step t."""
    order = check_permutation(g, sigma)
    masks = g.neighbor_masks
    installed = 0
    counts = []
    for v in order:
        counts.append((masks[v] & installed).bit_count())
        installed |= 1 << v
    return counts


def accumulate(costs: Sequence[float]) -> float:
    """Left-to-right float sum in installation order.

    The exact solvers accumulate the same way, so totals agree bit for bit.
    """
    total = 0.0
    for c in costs:
        total += c
    return total


def sequence_cost(g: Graph, f: CostFunction, sigma: Sequence[int]) -> CostReport:
    """Total installation cost C_G(sigma) with its per-step breakdown."""
    f.check_domain(g.max_degree)
    r_values = installed_neighbor_counts(g, sigma)
    node_costs = [f(r) for r in r_values]
    return CostReport(r_values=r_values, node_costs=node_costs, total=accumulate(node_costs))


def parse_cost_spec(spec: str, base_dir: Optional[Path] = None) -> CostFunction:
    """Parse "reciprocal:<a>", "linear:<a>,<b>", "indicator" or "table:<path>"."""
    text = spec.strip()
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "reciprocal":
            return CostFunction.reciprocal(float(arg) if arg else 1.0)
        if kind == "linear":
            a, b = (float(x) for x in arg.split(","))
            return CostFunction.linear(a, b)
        if kind == "indicator" and not arg:
            return CostFunction.indicator()
        if kind == "table" and arg:
            path = Path(arg)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            with open(path, "r", encoding="utf-8") as f:
                return CostFunction.table(float(tok) for tok in f.read().split())
    except InputError:
        raise
    except (ValueError, OSError) as e:
        raise InputError(f"invalid cost spec {spec!r}: {e}")
    raise InputError(f"unknown cost spec {spec!r}")
