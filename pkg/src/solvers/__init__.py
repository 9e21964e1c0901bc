"""Exact and heuristic installation-sequence solvers."""