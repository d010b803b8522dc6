"""Solver backends: the embedded CDCL engine, python-sat, or an external command."""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
import tempfile
import threading
from typing import Optional

from .cnf import CnfInstance, DimacsError, Sat, SolveResult, Unknown, Unsat, parse_dimacs, parse_dimacs_result, write_dimacs
from . import cdcl


class SolverError(RuntimeError):
    pass


def solve(cnf: CnfInstance, backend: str = "embedded", timeout: Optional[float] = None,
          seed: int = 0) -> SolveResult:
    """Dispatch on a backend descriptor.

    ``embedded`` runs the in-tree CDCL solver, ``pysat:<name>`` an in-process
    python-sat solver (e.g. ``pysat:cadical153``), and ``exec:<cmd>`` runs
    ``<cmd> <file.cnf>`` and parses its standard output.
    """
    if cnf.has_empty_clause:
        return Unsat()
    if backend == "embedded":
        res = cdcl.solve(cnf, timeout=timeout, seed=seed)
    elif backend.startswith("pysat:"):
        res = _solve_pysat(cnf, backend[6:] or "cadical153", timeout)
    elif backend.startswith("exec:"):
        res = _solve_exec(cnf, backend[5:], timeout)
    else:
        raise SolverError(f"unknown solver backend {backend!r}")
    if isinstance(res, Sat) and not cnf.check(_pad(res.assignment, cnf.num_vars)):
        raise SolverError(f"backend {backend!r} returned an assignment that violates the instance")
    if isinstance(res, Sat):
        res = Sat(tuple(_pad(res.assignment, cnf.num_vars)))
    return res


def _pad(model, n):
    model = list(model)
    if len(model) < n + 1:
        model.extend([False] * (n + 1 - len(model)))
    return model


def _solve_pysat(cnf: CnfInstance, name: str, timeout: Optional[float]) -> SolveResult:
    from pysat.solvers import Solver

    with Solver(name=name) as s:
        for c in cnf.iter_clauses():
            s.add_clause(c)
        if timeout is None:
            ok = s.solve()
        else:
            timer = threading.Timer(timeout, s.interrupt)
            timer.start()
            try:
                ok = s.solve_limited(expect_interrupt=True)
            finally:
                timer.cancel()
        if ok is None:
            return Unknown("timeout")
        if not ok:
            return Unsat()
        model = [False] * (cnf.num_vars + 1)
        for lit in s.get_model() or ():
            if 0 < lit <= cnf.num_vars:
                model[lit] = True
        return Sat(tuple(model))


def _solve_exec(cnf: CnfInstance, cmd: str, timeout: Optional[float]) -> SolveResult:
    argv = shlex.split(cmd)
    if not argv:
        raise SolverError("empty external solver command")
    fd, path = tempfile.mkstemp(suffix=".cnf")
    os.close(fd)
    try:
        write_dimacs(cnf, path)
        try:
            proc = subprocess.run(argv + [path], capture_output=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return Unknown("timeout")
        except OSError as e:
            raise SolverError(f"cannot run external solver {argv[0]!r}: {e}") from e
        try:
            return parse_dimacs_result(proc.stdout, cnf.num_vars)
        except DimacsError as e:
            raise SolverError(f"{e}\nstderr:\n{proc.stderr.decode(errors='replace')}") from e
    finally:
        os.unlink(path)


def main(argv=None) -> int:
    """``mpbmc-solve [--solver NAME] FILE.cnf``: competition-style DIMACS solver."""
    import argparse

    ap = argparse.ArgumentParser(prog="mpbmc-solve")
    ap.add_argument("--solver", default="pysat:cadical153",
                    help="embedded or pysat:<name> (default: pysat:cadical153)")
    ap.add_argument("path")
    args = ap.parse_args(argv)
    with open(args.path, "rb") as fh:
        cnf = parse_dimacs(fh.read())
    res = solve(cnf, args.solver)
    out = sys.stdout
    if isinstance(res, Unsat):
        out.write("s UNSATISFIABLE\n")
        return 20
    if isinstance(res, Unknown):
        out.write("s UNKNOWN\n")
        return 0
    lits = [v if res.assignment[v] else -v for v in range(1, cnf.num_vars + 1)]
    out.write("s SATISFIABLE\n")
    for i in range(0, len(lits), 20):
        out.write("v " + " ".join(map(str, lits[i:i + 20])) + "\n")
    out.write("v 0\n")
    return 10


if __name__ == "__main__":
    sys.exit(main())
