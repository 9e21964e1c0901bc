"""Base class for all installation-sequence solvers."""
from typing import Any, Dict, List, Optional, Tuple
from datetime import datetime
import asyncio
import logging
import time

from pydantic import BaseModel

from .cost_model import CostFunction, CostReport, InstallSequence
from .errors import SizeGuardError
from .graph import Graph

logger = logging.getLogger(__name__)


class SolveResult(BaseModel):
    schema_version: int = 1
    algorithm: str
    sequence: List[int]
    r_values: List[int]
    node_costs: List[float]
    total_cost: float
    seed: Optional[int] = None
    wall_time_ms: float

    def to_json_dict(self) -> Dict[str, Any]:
        data = self.model_dump()
        data["schema"] = data.pop("schema_version")
        return data


class BaseSolver:
    algorithm = ""
    uses_seed = False

    def __init__(self, solver_id: str, name: str, size_limit: Optional[int] = None):
        """Initialize a base solver."""
        self.solver_id = solver_id
        self.name = name
        self.size_limit = size_limit
        self.run_history: List[Dict[str, Any]] = []

        self._initialize_solver()

    def _initialize_solver(self) -> None:
        logger.info(f"Initializing {self.name} solver with ID {self.solver_id}")

    def check_size(self, g: Graph) -> None:
        if self.size_limit is not None and g.n > self.size_limit:
            raise SizeGuardError(
                f"{self.algorithm} solver handles at most {self.size_limit} nodes, graph has {g.n}"
            )

    def _solve(self, g: Graph, f: CostFunction, seed: Optional[int]) -> Tuple[InstallSequence, CostReport]:
        """Compute a sequence and its cost report."""
        raise NotImplementedError("Subclasses must implement _solve")

    def run(self, g: Graph, f: CostFunction, seed: Optional[int] = None) -> SolveResult:
        """Solve synchronously, timing the call and recording it."""
        self.check_size(g)
        started = time.perf_counter()
        sequence, report = self._solve(g, f, seed)
        elapsed_ms = (time.perf_counter() - started) * 1000.0

        result = SolveResult(
            algorithm=self.algorithm,
            sequence=list(sequence),
            r_values=report.r_values,
            node_costs=report.node_costs,
            total_cost=report.total,
            seed=seed if self.uses_seed else None,
            wall_time_ms=elapsed_ms,
        )
        self._record_run(g, result)
        return result

    async def solve(self, g: Graph, f: CostFunction, seed: Optional[int] = None) -> SolveResult:
        """Solve off the event loop."""
        return await asyncio.to_thread(self.run, g, f, seed)

    def _record_run(self, g: Graph, result: SolveResult) -> None:
        self.run_history.append({
            "timestamp": datetime.now().isoformat(),
            "n": g.n,
            "m": g.m,
            "total_cost": result.total_cost,
            "wall_time_ms": result.wall_time_ms,
        })
        logger.debug(f"{self.name} solved n={g.n} m={g.m} cost={result.total_cost}")
