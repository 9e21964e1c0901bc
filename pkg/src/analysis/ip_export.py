"""Integer-programming model of the installation problem, written as an LP file.

Variables: X_i_t (node i installed at step t, binary), E_i_j (i installed
before its neighbour j, continuous in [0, 1]) and c_j (cost paid by node j).
The cost of j is modelled by tangent cuts c_j >= l_d(sum_i E_i_j) through
(d-1, f(d-1)) and (d, f(d)), which describe the epigraph of a convex f.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, TextIO, Tuple, Union
import logging

import numpy as np

from ..core.cost_model import CostFunction, CostReport, is_convex, sequence_cost
from ..core.errors import InputError
from ..core.graph import Graph

logger = logging.getLogger(__name__)

Term = Tuple[float, str]

_TERMS_PER_LINE = 8


@dataclass
class Constraint:
    name: str
    terms: List[Term]
    sense: str
    rhs: float


@dataclass
class IpModel:
    n: int
    x_vars: List[str] = field(default_factory=list)
    e_vars: List[str] = field(default_factory=list)
    c_vars: List[str] = field(default_factory=list)
    objective: List[Term] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    lower_bounds: Dict[str, float] = field(default_factory=dict)

    def count(self, prefix: str) -> int:
        return sum(1 for c in self.constraints if c.name.startswith(prefix))


def x_name(i: int, t: int) -> str:
    return f"X_{i}_{t}"


def e_name(i: int, j: int) -> str:
    return f"E_{i}_{j}"


def c_name(j: int) -> str:
    return f"c_{j}"


def tangent(f: CostFunction, d: int) -> Tuple[float, float]:
    """(slope, intercept) of l_d(x) = f(d) + (f(d) - f(d-1)) (x - d)."""
    slope = f(d) - f(d - 1)
    return slope, f(d) - slope * d


def _per_node(g: Graph, f: Union[CostFunction, Sequence[CostFunction]]) -> List[CostFunction]:
    if isinstance(f, CostFunction):
        return [f] * g.n
    funcs = list(f)
    if len(funcs) != g.n:
        raise InputError(f"expected {g.n} per-node cost functions, got {len(funcs)}")
    return funcs


def build_ip(g: Graph, f: Union[CostFunction, Sequence[CostFunction]]) -> IpModel:
    """Assemble the model; f may be one function or one per node."""
    funcs = _per_node(g, f)
    for j, fj in enumerate(funcs):
        if not is_convex(fj, g.degrees[j]):
            raise InputError(f"IP export requires convex f (node {j})")

    n = g.n
    steps = range(1, n + 1)
    model = IpModel(n=n)
    model.x_vars = [x_name(i, t) for i in range(n) for t in steps]
    model.e_vars = [e_name(i, j) for j in range(n) for i in g.adjacency[j]]
    model.c_vars = [c_name(j) for j in range(n)]
    model.objective = [(1.0, c) for c in model.c_vars]

    for j in range(n):
        for d in range(1, g.degrees[j] + 1):
            slope, intercept = tangent(funcs[j], d)
            terms = [(1.0, c_name(j))] + [(-slope, e_name(i, j)) for i in g.adjacency[j]]
            model.constraints.append(Constraint(f"cut_{j}_{d}", terms, ">=", intercept))

    # E_i_j >= sum_{t<=T} (X_i_t - X_j_t): forces E_i_j = 1 when i precedes j.
    for T in range(1, n):
        for i in range(n):
            for j in g.adjacency[i]:
                terms = [(1.0, e_name(i, j))]
                terms += [(-1.0, x_name(i, t)) for t in range(1, T + 1)]
                terms += [(1.0, x_name(j, t)) for t in range(1, T + 1)]
                model.constraints.append(Constraint(f"prec_{T}_{i}_{j}", terms, ">=", 0.0))

    for i, j in g.edges():
        model.constraints.append(
            Constraint(f"pair_{i}_{j}", [(1.0, e_name(i, j)), (1.0, e_name(j, i))], "=", 1.0))

    for i in range(n):
        model.constraints.append(
            Constraint(f"node_{i}", [(1.0, x_name(i, t)) for t in steps], "=", 1.0))
    for t in steps:
        model.constraints.append(
            Constraint(f"step_{t}", [(1.0, x_name(i, t)) for i in range(n)], "=", 1.0))

    # c_j >= min f_j over 0..deg j; isolated nodes have no cuts.
    model.lower_bounds = {c_name(j): min(funcs[j].values_upto(g.degrees[j])) for j in range(n)}
    logger.info(f"Built IP: {len(model.x_vars)} X, {len(model.e_vars)} E, "
                f"{len(model.c_vars)} c, {len(model.constraints)} constraints")
    return model


def _num(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _expression(terms: List[Term]) -> List[str]:
    parts = []
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        body = var if magnitude == 1.0 else f"{_num(magnitude)} {var}"
        if k == 0:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    lines = []
    for start in range(0, len(parts), _TERMS_PER_LINE):
        lines.append(" ".join(parts[start:start + _TERMS_PER_LINE]))
    return lines


def write_lp(model: IpModel, sink: TextIO) -> None:
    """Emit the model in LP format (Minimize/Subject To/Bounds/Binaries/End)."""
    out: List[str] = ["\\ NANIP installation model", "Minimize"]
    objective = _expression(model.objective) or ["0"]
    out.append(f" obj: {objective[0]}")
    out.extend(f"   {line}" for line in objective[1:])

    out.append("Subject To")
    for con in model.constraints:
        body = _expression(con.terms)
        if len(body) == 1:
            out.append(f" {con.name}: {body[0]} {con.sense} {_num(con.rhs)}")
        else:
            out.append(f" {con.name}: {body[0]}")
            out.extend(f"   {line}" for line in body[1:-1])
            out.append(f"   {body[-1]} {con.sense} {_num(con.rhs)}")

    out.append("Bounds")
    for var in model.e_vars:
        out.append(f" 0 <= {var} <= 1")
    for var in model.c_vars:
        out.append(f" {var} >= {_num(model.lower_bounds.get(var, 0.0))}")

    out.append("Binaries")
    for start in range(0, len(model.x_vars), _TERMS_PER_LINE):
        out.append(" " + " ".join(model.x_vars[start:start + _TERMS_PER_LINE]))
    out.append("End")
    sink.write("\n".join(out) + "\n")


def _decode_permutation(x_values, n: int) -> List[int]:
    x = np.asarray(x_values, dtype=float)
    if x.shape != (n, n):
        raise InputError(f"X must be {n}x{n}, got shape {x.shape}")
    if not np.all((x == 0.0) | (x == 1.0)):
        i, t = np.argwhere((x != 0.0) & (x != 1.0))[0]
        raise InputError(f"X is not integral at row {i}, column {t}")
    for i, total in enumerate(x.sum(axis=1)):
        if total != 1:
            raise InputError(f"X row {i} (node {i}) sums to {total:g}, expected 1")
    for t, total in enumerate(x.sum(axis=0)):
        if total != 1:
            raise InputError(f"X column {t} (step {t + 1}) sums to {total:g}, expected 1")
    return [int(i) for i in np.argmax(x, axis=0)]


def induced_solution(g: Graph, model: IpModel, order: Sequence[int]) -> Dict[str, float]:
    """Values of every variable implied by installing nodes in `order`."""
    position = {v: t for t, v in enumerate(order)}
    values: Dict[str, float] = {}
    for t, v in enumerate(order, start=1):
        for i in range(g.n):
            values[x_name(i, t)] = 1.0 if i == v else 0.0
    for j in range(g.n):
        for i in g.adjacency[j]:
            values[e_name(i, j)] = 1.0 if position[i] < position[j] else 0.0
    for j in range(g.n):
        c = c_name(j)
        lowest = model.lower_bounds.get(c, 0.0)
        for con in model.constraints:
            if con.name.startswith(f"cut_{j}_"):
                rest = sum(coef * values[var] for coef, var in con.terms if var != c)
                lowest = max(lowest, con.rhs - rest)
        values[c] = lowest
    return values


def violated_constraints(model: IpModel, values: Dict[str, float], tol: float = 1e-9) -> List[str]:
    bad = []
    for con in model.constraints:
        lhs = sum(coef * values[var] for coef, var in con.terms)
        if con.sense == ">=" and lhs < con.rhs - tol:
            bad.append(con.name)
        elif con.sense == "=" and abs(lhs - con.rhs) > tol:
            bad.append(con.name)
    return bad


def validate_assignment(g: Graph, f: CostFunction, x_values, tol: float = 1e-6) -> CostReport:
    """Check a solver's X matrix: decode sigma, score it, and confirm that the
    model objective at the induced (E, c) equals C_G(sigma)."""
    order = _decode_permutation(x_values, g.n)
    report = sequence_cost(g, f, order)
    model = build_ip(g, f)
    values = induced_solution(g, model, order)
    bad = violated_constraints(model, values)
    if bad:
        raise InputError(f"induced solution violates {bad[0]} ({len(bad)} constraints)")
    objective = sum(coef * values[var] for coef, var in model.objective)
    if abs(objective - report.total) > tol:
        raise InputError(f"model objective {objective} differs from sequence cost {report.total}")
    return report
