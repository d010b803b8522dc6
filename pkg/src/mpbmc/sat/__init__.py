"""Propositional layer: formula graphs, CNF, solvers, DIMACS."""

from .graph import FALSE, TRUE, PropositionalGraph
from .cnf import (
    CnfInstance, DimacsError, Sat, SolveResult, TseitinResult, Unknown, Unsat,
    emit_dimacs, parse_dimacs, parse_dimacs_result, tseitin, tseitin_map, write_dimacs,
)
from .cdcl import CDCLSolver
from .backends import SolverError, solve

__all__ = [
    "FALSE", "TRUE", "PropositionalGraph", "CnfInstance", "DimacsError", "Sat", "SolveResult",
    "TseitinResult", "Unknown", "Unsat", "emit_dimacs", "parse_dimacs", "parse_dimacs_result",
    "tseitin", "tseitin_map", "write_dimacs", "CDCLSolver", "SolverError", "solve",
]
