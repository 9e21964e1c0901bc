"""Solver orchestrator: registry, request coordination and the greedy-vs-optimum benchmark."""
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from functools import partial
from typing import Any, Dict, List, Optional, TextIO, Tuple
import asyncio
import logging

import numpy as np
import pandas as pd
from pydantic import BaseModel

from .base_solver import BaseSolver
from .config import BenchSettings, Fig3Defaults, load_settings
from .cost_model import CostFunction, parse_cost_spec
from .errors import InputError, InvariantViolation, NanipError, SizeGuardError
from .graph import Graph, gen_random_connected
from ..analysis.bounds import (greedy_upper_bound, jensen_whole_graph_bound,
                               optimality_gap, relaxation_bound)
from ..analysis.random_analysis import derive_seed
from ..solvers.exact import dp_optimal, nanip_oracle
from ..solvers.heuristics import degree_descending, greedy, random_sequence

logger = logging.getLogger(__name__)

GREEDY_STREAM = 1
RANDOM_STREAM = 2


class BenchRecord(BaseModel):
    """One (m, instance) row of the greedy-vs-optimum benchmark."""
    m: int
    instance_id: int
    seed: int
    optimum: float
    greedy_mean: float
    greedy_min: float
    greedy_max: float
    degree_cost: float
    random_mean: float
    jensen_bound: float
    relaxation_bound: float
    greedy_upper_bound: float

    def check_invariants(self, tol: float) -> List[str]:
        """Names of the bound-sandwich relations this record breaks."""
        checks = [
            ("relaxation_bound <= optimum", self.relaxation_bound <= self.optimum + tol),
            ("jensen_bound <= optimum", self.jensen_bound <= self.optimum + tol),
            ("optimum <= greedy_min", self.optimum <= self.greedy_min + tol),
            ("greedy_min <= greedy_mean", self.greedy_min <= self.greedy_mean + tol),
            ("greedy_max <= greedy_upper_bound", self.greedy_max <= self.greedy_upper_bound + tol),
        ]
        return [name for name, ok in checks if not ok]


BENCH_COLUMNS = list(BenchRecord.model_fields)


class BenchSummary(BaseModel):
    records: int
    mean_ratio: float
    max_ratio: float
    claim_tolerance: float
    claim_holds: bool
    degree_not_better: int
    relaxation_tighter: int
    jensen_tighter: int

    def line(self) -> str:
        verdict = "holds" if self.claim_holds else "FAILS"
        return (f"mean(greedy_mean/optimum) = {self.mean_ratio:.6f} over {self.records} records; "
                f"claim <= {self.claim_tolerance} {verdict}")


def evaluate_bench_instance(n: int, m: int, instance_id: int, master_seed: int,
                            greedy_runs: int, f: CostFunction, dp_limit: int) -> BenchRecord:
    """Generate one instance and score every method and bound on it."""
    seed = derive_seed(master_seed, m, instance_id)
    g = gen_random_connected(n, m, seed)
    _, optimum = dp_optimal(g, nanip_oracle(g, f), max_nodes=dp_limit)

    greedy_costs = [greedy(g, f, derive_seed(master_seed, m, instance_id, GREEDY_STREAM, run))[1].total
                    for run in range(greedy_runs)]
    random_costs = [random_sequence(g, f, derive_seed(master_seed, m, instance_id, RANDOM_STREAM, run))[1].total
                    for run in range(greedy_runs)]

    return BenchRecord(
        m=m,
        instance_id=instance_id,
        seed=seed,
        optimum=optimum,
        greedy_mean=float(np.mean(greedy_costs)),
        greedy_min=min(greedy_costs),
        greedy_max=max(greedy_costs),
        degree_cost=degree_descending(g, f)[1].total,
        random_mean=float(np.mean(random_costs)),
        jensen_bound=jensen_whole_graph_bound(g, f),
        relaxation_bound=relaxation_bound(g, f).bound,
        greedy_upper_bound=greedy_upper_bound(g, f).bound,
    )


def summarize(records: List[BenchRecord], claim_tolerance: float) -> BenchSummary:
    ratios = [r.greedy_mean / r.optimum for r in records]
    mean_ratio = float(np.mean(ratios)) if ratios else 1.0
    return BenchSummary(
        records=len(records),
        mean_ratio=mean_ratio,
        max_ratio=max(ratios, default=1.0),
        claim_tolerance=claim_tolerance,
        claim_holds=mean_ratio <= claim_tolerance,
        degree_not_better=sum(1 for r in records if r.degree_cost >= r.greedy_mean),
        relaxation_tighter=sum(1 for r in records if r.relaxation_bound > r.jensen_bound),
        jensen_tighter=sum(1 for r in records if r.jensen_bound > r.relaxation_bound),
    )


def records_to_frame(records: List[BenchRecord]) -> pd.DataFrame:
    frame = pd.DataFrame([r.model_dump() for r in records], columns=BENCH_COLUMNS)
    # Seeds may exceed int64.
    frame["seed"] = [str(r.seed) for r in records]
    return frame


def write_bench_csv(records: List[BenchRecord], sink: TextIO) -> None:
    records_to_frame(records).to_csv(sink, index=False, lineterminator="\n")


class SolverOrchestrator:
    def __init__(self, settings: Optional[BenchSettings] = None):
        self.solvers: Dict[str, BaseSolver] = {}
        self.settings = settings or load_settings()
        self.decision_history: List[Dict[str, Any]] = []
        logger.info("Initializing Solver Orchestrator")

    def register_solver(self, solver: BaseSolver) -> None:
        """Register a solver under its algorithm key."""
        self.solvers[solver.algorithm] = solver
        logger.info(f"Registered solver: {solver.name} ({solver.solver_id}) as '{solver.algorithm}'")

    def get_solver(self, algorithm: str) -> Optional[BaseSolver]:
        return self.solvers.get(algorithm)

    async def coordinate_solve(self, algorithm: str, graph: Graph, cost: CostFunction,
                               seed: Optional[int] = None) -> Dict[str, Any]:
        """Run one registered solver and wrap the outcome in a status payload."""
        try:
            solver = self.solvers.get(algorithm)
            if not solver:
                raise InputError(f"unknown algorithm '{algorithm}'; known: {sorted(self.solvers)}")
            result = await solver.solve(graph, cost, seed)
            self._record_decision("solve", algorithm, graph, result.total_cost)
            return {
                "status": "success",
                "result": result.to_json_dict(),
                "timestamp": datetime.now().isoformat(),
            }
        except NanipError as e:
            return self._error_payload("solve", e)

    async def coordinate_bounds(self, graph: Graph, cost: CostFunction,
                                gap_algorithm: Optional[str] = None,
                                seed: Optional[int] = None) -> Dict[str, Any]:
        """All analytic bounds with witnesses, plus an optional heuristic gap."""
        try:
            relaxation = relaxation_bound(graph, cost)
            report: Dict[str, Any] = {
                "schema": self.settings.schema_version,
                "jensen_bound": jensen_whole_graph_bound(graph, cost),
                "relaxation": relaxation.model_dump(),
                "warnings": [],
            }
            try:
                report["greedy_upper"] = greedy_upper_bound(graph, cost).model_dump()
            except InputError as e:
                report["greedy_upper"] = None
                report["warnings"].append(str(e))
            best_lower = max(report["jensen_bound"], relaxation.bound)
            report["best_lower_bound"] = best_lower

            if gap_algorithm:
                solver = self.solvers.get(gap_algorithm)
                if not solver:
                    raise InputError(f"unknown algorithm '{gap_algorithm}'")
                result = await solver.solve(graph, cost, seed)
                report["gap"] = {
                    "algorithm": gap_algorithm,
                    "total_cost": result.total_cost,
                    **optimality_gap(result.total_cost, best_lower),
                }
            self._record_decision("bound", gap_algorithm or "-", graph, best_lower)
            return {"status": "success", "result": report, "timestamp": datetime.now().isoformat()}
        except NanipError as e:
            return self._error_payload("bound", e)

    async def run_fig3_benchmark(self, params: Optional[Fig3Defaults] = None,
                                 cost: Optional[CostFunction] = None,
                                 workers: Optional[int] = None) -> Tuple[List[BenchRecord], BenchSummary]:
        """Greedy against the exact optimum on random connected graphs.

        Records come back ordered by (m, instance_id) whatever the completion
        order; any record breaking the bound sandwich aborts the run.
        """
        params = params or self.settings.fig3
        f = cost or parse_cost_spec(params.cost)
        n = params.n
        dp_limit = self.settings.size_guards.dp
        if n > dp_limit:
            raise SizeGuardError(f"benchmark needs exact optima; n={n} exceeds the DP limit {dp_limit}")
        m_values = params.m_values()
        for m in m_values:
            if not n - 1 <= m <= n * (n - 1) // 2:
                raise InputError(f"m={m} is not a valid connected edge count for n={n}")

        jobs = [(m, i) for m in m_values for i in range(params.instances)]
        task = partial(evaluate_bench_instance, n, master_seed=params.master_seed,
                       greedy_runs=params.greedy_runs, f=f, dp_limit=dp_limit)
        workers = workers or self.settings.worker_count
        logger.info(f"Benchmark: n={n}, {len(m_values)} edge counts x {params.instances} instances, "
                    f"{workers} worker(s)")

        if workers <= 1:
            records = []
            for m, i in jobs:
                records.append(await asyncio.to_thread(task, m, i))
        else:
            loop = asyncio.get_running_loop()
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [loop.run_in_executor(pool, partial(task, m, i)) for m, i in jobs]
                records = list(await asyncio.gather(*futures))

        records.sort(key=lambda r: (r.m, r.instance_id))
        tol = self.settings.tolerances.cost
        for record in records:
            broken = record.check_invariants(tol)
            if broken:
                raise InvariantViolation(f"record m={record.m} instance={record.instance_id} "
                                         f"violates {', '.join(broken)}: {record.model_dump()}")

        summary = summarize(records, self.settings.tolerances.gap_claim)
        logger.info(summary.line())
        return records, summary

    def _record_decision(self, kind: str, algorithm: str, graph: Graph, value: float) -> None:
        self.decision_history.append({
            "timestamp": datetime.now().isoformat(),
            "kind": kind,
            "algorithm": algorithm,
            "n": graph.n,
            "m": graph.m,
            "value": value,
        })

    def _error_payload(self, kind: str, e: NanipError) -> Dict[str, Any]:
        logger.error(f"Error in {kind}: {e}")
        return {
            "status": "error",
            "error": str(e),
            "kind": type(e).__name__,
            "exit_code": e.exit_code,
            "timestamp": datetime.now().isoformat(),
        }
