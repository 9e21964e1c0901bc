"""CLI interface for the NANIP solver toolkit."""
import asyncio
import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional
import logging
from dotenv import load_dotenv

from .analysis.ip_export import build_ip, write_lp
from .analysis.random_analysis import (ErModel, expected_cost_exact, expected_cost_monte_carlo,
                                       expected_cost_upper)
from .core.config import load_settings
from .core.cost_model import parse_cost_spec
from .core.errors import InputError, InvariantViolation, NanipError
from .core.graph import (Graph, check_seed, gen_gnp, gen_random_connected, gen_random_tree,
                         read_edge_list, to_edge_list)
from .core.orchestrator import SolverOrchestrator, write_bench_csv
from .solvers.exact import BruteForceSolver, DpSolver
from .solvers.heuristics import DegreeDescendingSolver, GreedySolver, RandomSequenceSolver

logger = logging.getLogger(__name__)

ALGORITHMS = ["dp", "brute", "greedy", "degree", "random"]
DEFAULT_COST = "reciprocal:1"


class NanipCLI:
    def __init__(self):
        self.settings = load_settings()
        self.orchestrator = SolverOrchestrator(self.settings)
        self._setup_solvers()

    def _setup_solvers(self) -> None:
        """Initialize and register every solver."""
        guards = self.settings.size_guards
        self.orchestrator.register_solver(DpSolver("dp-1", size_limit=guards.dp))
        self.orchestrator.register_solver(BruteForceSolver("brute-1", size_limit=guards.brute))
        self.orchestrator.register_solver(GreedySolver("greedy-1"))
        self.orchestrator.register_solver(DegreeDescendingSolver("degree-1"))
        self.orchestrator.register_solver(RandomSequenceSolver("random-1"))

    async def run(self, args: argparse.Namespace) -> int:
        handler = getattr(self, "cmd_" + args.command.replace("-", "_"))
        try:
            return await handler(args)
        except NanipError as e:
            logger.error(f"{args.command} failed: {e}")
            self._emit_json(_error_dict(e), None)
            return e.exit_code

    async def cmd_solve(self, args: argparse.Namespace) -> int:
        graph = _load_graph(args.graph)
        cost = parse_cost_spec(args.cost or DEFAULT_COST)
        response = await self.orchestrator.coordinate_solve(args.alg, graph, cost, _seed(args))
        return self._finish(response, args.out)

    async def cmd_bound(self, args: argparse.Namespace) -> int:
        graph = _load_graph(args.graph)
        cost = parse_cost_spec(args.cost or DEFAULT_COST)
        response = await self.orchestrator.coordinate_bounds(graph, cost, args.alg, _seed(args))
        return self._finish(response, args.out)

    async def cmd_bench_fig3(self, args: argparse.Namespace) -> int:
        overrides: Dict[str, Any] = {
            "n": args.n, "m_start": args.m_start, "m_stop": args.m_stop, "m_step": args.m_step,
            "instances": args.instances, "greedy_runs": args.runs, "cost": args.cost,
            "master_seed": None if args.seed is None else check_seed(args.seed),
        }
        params = self.settings.fig3.model_copy(
            update={k: v for k, v in overrides.items() if v is not None})
        records, summary = await self.orchestrator.run_fig3_benchmark(
            params, parse_cost_spec(params.cost), workers=args.threads)

        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                write_bench_csv(records, f)
        else:
            write_bench_csv(records, sys.stdout)

        if args.json:
            print(json.dumps({"schema": self.settings.schema_version, **summary.model_dump()}),
                  file=sys.stderr)
        else:
            print(summary.line(), file=sys.stderr)
        if not summary.claim_holds:
            raise InvariantViolation(summary.line())
        return 0

    async def cmd_expected_cost(self, args: argparse.Namespace) -> int:
        try:
            model = ErModel(n=args.n, p=args.p)
        except ValueError as e:
            raise InputError(f"invalid random graph model: {e}")
        cost = parse_cost_spec(args.cost or DEFAULT_COST)
        result: Dict[str, Any] = {
            "schema": self.settings.schema_version,
            "n": model.n,
            "p": model.p,
            "exact": expected_cost_exact(model, cost),
            "upper_bound": None,
            "errors": [],
        }
        try:
            result["upper_bound"] = expected_cost_upper(model, cost)
        except InputError as e:
            result["errors"].append(str(e))
        if args.trials:
            mean, stderr = await asyncio.to_thread(
                expected_cost_monte_carlo, model, cost, args.trials, _seed(args))
            result["monte_carlo"] = {"mean": mean, "stderr": stderr, "trials": args.trials,
                                     "seed": _seed(args)}
        self._emit_json(result, args.out)
        return 0

    async def cmd_gen(self, args: argparse.Namespace) -> int:
        if args.kind == "tree":
            graph = gen_random_tree(args.n, _seed(args))
        elif args.kind == "connected":
            if args.m is None:
                raise InputError("--m is required for connected graphs")
            graph = gen_random_connected(args.n, args.m, _seed(args))
        else:
            if args.p is None:
                raise InputError("--p is required for G(n, p) graphs")
            graph = gen_gnp(args.n, args.p, _seed(args))
        _write_text(to_edge_list(graph), args.out)
        if args.json:
            self._emit_json({"schema": self.settings.schema_version, "kind": args.kind,
                             "n": graph.n, "m": graph.m, "seed": _seed(args), "out": args.out},
                            None if args.out else sys.stderr)
        return 0

    async def cmd_export_ip(self, args: argparse.Namespace) -> int:
        graph = _load_graph(args.graph)
        if args.cost_per_node:
            try:
                with open(args.cost_per_node, "r", encoding="utf-8") as f:
                    specs: List[str] = json.load(f)
            except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
                raise InputError(f"cannot read per-node costs {args.cost_per_node}: {e}")
            if not isinstance(specs, list) or not all(isinstance(s, str) for s in specs):
                raise InputError("--cost-per-node must hold a JSON list of cost specs")
            base = Path(args.cost_per_node).parent
            cost = [parse_cost_spec(spec, base) for spec in specs]
        else:
            cost = parse_cost_spec(args.cost or DEFAULT_COST)
        model = build_ip(graph, cost)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                write_lp(model, f)
        else:
            write_lp(model, sys.stdout)
        if args.json:
            self._emit_json({"schema": self.settings.schema_version, "x_vars": len(model.x_vars),
                             "e_vars": len(model.e_vars), "c_vars": len(model.c_vars),
                             "constraints": len(model.constraints), "out": args.out},
                            None if args.out else sys.stderr)
        return 0

    def _finish(self, response: Dict[str, Any], out: Optional[str]) -> int:
        if response["status"] == "success":
            self._emit_json(response["result"], out)
            return 0
        self._emit_json({"schema": self.settings.schema_version, "status": "error",
                         "error": response["error"], "kind": response["kind"]}, None)
        return response["exit_code"]

    def _emit_json(self, payload: Dict[str, Any], out) -> None:
        text = json.dumps(payload, indent=2)
        if out is None or isinstance(out, str):
            _write_text(text + "\n", out)
        else:
            print(text, file=out)


def _error_dict(e: NanipError) -> Dict[str, Any]:
    return {"schema": 1, "status": "error", "error": str(e), "kind": type(e).__name__}


def _seed(args: argparse.Namespace) -> int:
    return 0 if args.seed is None else check_seed(args.seed)


def _load_graph(path: Optional[str]) -> Graph:
    if not path:
        raise InputError("--graph is required")
    try:
        return read_edge_list(path)
    except OSError as e:
        raise InputError(f"cannot read graph file {path}: {e}")


def _write_text(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nanip", description="Neighbor-aided network installation toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="edge-list file")
    common.add_argument("--cost", help=f"cost spec (default: {DEFAULT_COST})")
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed (default: 0)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--json", action="store_true", help="emit a JSON status/summary")

    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="compute an installation sequence")
    solve.add_argument("--alg", choices=ALGORITHMS, default="dp")

    bound = sub.add_parser("bound", parents=[common], help="analytic lower and upper bounds")
    bound.add_argument("--alg", choices=ALGORITHMS, help="also report this algorithm's optimality gap")

    bench = sub.add_parser("bench-fig3", parents=[common], help="greedy vs. optimum benchmark")
    bench.add_argument("--n", type=int)
    bench.add_argument("--m-start", type=int)
    bench.add_argument("--m-stop", type=int)
    bench.add_argument("--m-step", type=int)
    bench.add_argument("--instances", type=int)
    bench.add_argument("--runs", type=int, help="greedy runs per instance")
    bench.add_argument("--threads", type=int, help="worker processes (0 = auto)")

    expected = sub.add_parser("expected-cost", parents=[common], help="random-sequence expectation on G(n, p)")
    expected.add_argument("--n", type=int, required=True)
    expected.add_argument("--p", type=float, required=True)
    expected.add_argument("--trials", type=int, default=0, help="Monte Carlo trials (0 = skip)")

    gen = sub.add_parser("gen", parents=[common], help="generate a random graph")
    gen.add_argument("--kind", choices=["tree", "connected", "gnp"], required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int)
    gen.add_argument("--p", type=float)

    export = sub.add_parser("export-ip", parents=[common], help="write the integer program as an LP file")
    export.add_argument("--cost-per-node", help="JSON list with one cost spec per node")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI application."""
    load_dotenv()  # Load environment variables

    logging.basicConfig(level=os.getenv("NANIP_LOG_LEVEL", "INFO").upper(), stream=sys.stderr)
    args = build_parser().parse_args(argv)
    cli = NanipCLI()
    if getattr(args, "threads", None) == 0:
        args.threads = None

    return asyncio.run(cli.run(args))


if __name__ == "__main__":
    sys.exit(main())
