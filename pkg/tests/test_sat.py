import itertools
import random
import shutil
import sys

import pytest
from hypothesis import given, settings, strategies as st

from mpbmc.sat import (
    FALSE, TRUE, CDCLSolver, CnfInstance, DimacsError, PropositionalGraph, Sat, SolverError, Unknown,
    Unsat, emit_dimacs, parse_dimacs, parse_dimacs_result, solve, tseitin, tseitin_map,
)


def random_3cnf(rng: random.Random, n: int, ratio: float) -> CnfInstance:
    m = int(n * ratio)
    return CnfInstance(n, [[v * rng.choice((1, -1)) for v in rng.sample(range(1, n + 1), 3)] for _ in range(m)])


def brute_sat(cnf: CnfInstance) -> bool:
    n = cnf.num_vars
    for bits in itertools.product((False, True), repeat=n):
        if cnf.check((False,) + bits):
            return True
    return False


def solver_command() -> str:
    exe = shutil.which("mpbmc-solve")
    return f"exec:{exe}" if exe else f"exec:{sys.executable} -m mpbmc.sat.backends"


# ---------------------------------------------------------------- CNF container


def test_tautologies_dropped():
    c = CnfInstance(2, [[1, -1], [1, 2], [2, 2, 1]])
    assert c.clauses == [[1, 2], [2, 1]]


def test_literal_zero_rejected():
    with pytest.raises(ValueError):
        CnfInstance(1, [[0]])


def test_vars_in_range():
    c = CnfInstance(0, [[3, -5]])
    assert c.num_vars == 5
    assert all(abs(x) <= c.num_vars for cl in c.clauses for x in cl)


# ---------------------------------------------------------------- Tseitin


def test_tseitin_single_var():
    g = PropositionalGraph()
    g.assert_(g.var("x"))
    c = tseitin(g)
    assert (c.num_vars, c.num_clauses) == (1, 1)
    assert isinstance(solve(c), Sat)


def test_tseitin_contradiction():
    g = PropositionalGraph()
    x = g.var("x")
    g.assert_(g.and2(x, -x))
    assert isinstance(solve(tseitin(g)), Unsat)


def test_tseitin_or_tree_size():
    g = PropositionalGraph()
    lits = [g.var(i) for i in range(8)]
    while len(lits) > 1:
        lits = [g.or2(lits[i], lits[i + 1]) for i in range(0, len(lits), 2)]
    g.assert_(lits[0])
    c = tseitin(g)
    assert c.num_vars - 8 <= 7
    assert c.num_clauses <= 1 + 7 * 3


def test_tseitin_shared_nodes_once():
    g = PropositionalGraph()
    a, b = g.var("a"), g.var("b")
    n1 = g.and2(a, b)
    n2 = g.and2(b, a)
    assert n1 == n2
    g.assert_(g.or2(n1, g.var("c")))
    g.assert_(g.or2(n2, -g.var("c")))
    assert tseitin(g).num_vars == 6  # a, b, c, one shared and, two ors
    assert g.or2(n1, -n2) == TRUE


def test_graph_constants():
    g = PropositionalGraph()
    a = g.var("a")
    assert g.and2(a, FALSE) == FALSE and g.and2(a, TRUE) == a and g.or2(a, TRUE) == TRUE


def random_graph(rng: random.Random, nvars: int, nodes: int):
    g = PropositionalGraph()
    pool = [g.var(i) for i in range(nvars)]
    for _ in range(nodes):
        a, b = rng.choice(pool), rng.choice(pool)
        a, b = a * rng.choice((1, -1)), b * rng.choice((1, -1))
        op = rng.choice((g.and2, g.or2, g.implies, g.iff))
        pool.append(op(a, b))
    root = pool[-1] * rng.choice((1, -1))
    g.assert_(root)
    return g, root


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(1, 12))
def test_tseitin_equisatisfiable(seed, nvars, nodes):
    rng = random.Random(seed)
    g, root = random_graph(rng, nvars, nodes)
    direct = any(g.lit_value(g.evaluate(dict(enumerate(bits))), root)
                 for bits in itertools.product((False, True), repeat=nvars))
    tm = tseitin_map(g)
    assert brute_sat(tm.cnf) == direct
    res = solve(tm.cnf)
    assert isinstance(res, Sat) == direct
    if direct:
        # the model restricted to the input variables satisfies the graph
        vals = {i: res.assignment[tm.node_var[g.keys[i]]] for i in range(nvars) if g.keys[i] in tm.node_var}
        assert g.lit_value(g.evaluate(vals), root)


# ---------------------------------------------------------------- CDCL


def test_empty_instance_sat():
    assert isinstance(solve(CnfInstance()), Sat)


def test_unit_conflict_unsat():
    assert isinstance(solve(CnfInstance(1, [[1], [-1]])), Unsat)


def test_empty_clause_unsat():
    c = CnfInstance(1)
    c.add_clause([])
    assert isinstance(solve(c), Unsat)


def test_pigeonhole_unsat():
    # 4 pigeons, 3 holes
    v = lambda i, j: 3 * i + j + 1  # noqa: E731
    cls = [[v(i, j) for j in range(3)] for i in range(4)]
    cls += [[-v(i, j), -v(k, j)] for j in range(3) for i in range(4) for k in range(i + 1, 4)]
    assert isinstance(solve(CnfInstance(12, cls)), Unsat)


def test_random_3cnf_ratio_two_all_sat():
    rng = random.Random(2024)
    for _ in range(50):
        c = random_3cnf(rng, 40, 2.0)
        res = solve(c)
        assert isinstance(res, Sat) and c.check(res.assignment)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(3, 10), st.floats(1.0, 7.0))
def test_cdcl_matches_brute_force(seed, n, ratio):
    c = random_3cnf(random.Random(seed), n, ratio)
    res = solve(c, seed=seed % 7)
    assert isinstance(res, Sat) == brute_sat(c)
    if isinstance(res, Sat):
        assert c.check(res.assignment)


def test_cdcl_deterministic():
    c = random_3cnf(random.Random(5), 60, 4.0)
    a = CDCLSolver(c, seed=3).solve()
    b = CDCLSolver(c, seed=3).solve()
    assert a == b


def test_conflict_limit_unknown():
    c = random_3cnf(random.Random(9), 120, 4.26)
    res = CDCLSolver(c).solve(conflict_limit=1)
    assert isinstance(res, (Unknown, Sat, Unsat))


def test_unknown_backend():
    with pytest.raises(SolverError):
        solve(CnfInstance(1, [[1]]), "frobnicate")


# ---------------------------------------------------------------- DIMACS


def test_emit_unit_instance():
    assert emit_dimacs(CnfInstance(1, [[1]]), comments=False) == b"p cnf 1 1\n1 0\n"


def test_emit_comments_map_variables():
    g = PropositionalGraph()
    g.assert_(g.var(("atom", "p", 0)))
    out = emit_dimacs(tseitin(g)).decode()
    assert "c var 1 atom p 0" in out and out.rstrip().endswith("1 0")


def test_dimacs_roundtrip():
    c = random_3cnf(random.Random(1), 20, 3.0)
    back = parse_dimacs(emit_dimacs(c))
    assert back.num_vars == c.num_vars and back.clauses == c.clauses


def test_parse_dimacs_bad_header():
    with pytest.raises(DimacsError):
        parse_dimacs("p dnf 1 1\n1 0\n")


@pytest.mark.parametrize("text,kind", [
    ("s UNSATISFIABLE\n", Unsat),
    ("UNSAT\n", Unsat),
    ("s SATISFIABLE\nv 1 -2\nv 3 0\n", Sat),
    ("SAT\n1 -2 3 0\n", Sat),
    ("s UNKNOWN\n", Unknown),
])
def test_parse_result_conventions(text, kind):
    res = parse_dimacs_result(text)
    assert isinstance(res, kind)
    if kind is Sat:
        assert res.assignment[1] and not res.assignment[2] and res.assignment[3]


def test_parse_result_garbage_verbatim():
    with pytest.raises(DimacsError) as e:
        parse_dimacs_result("segfault at 0x0\n")
    assert "segfault at 0x0" in str(e.value)


# ---------------------------------------------------------------- backends


def test_pysat_backend_agrees():
    rng = random.Random(77)
    for _ in range(20):
        c = random_3cnf(rng, 30, rng.choice((3.0, 4.3, 6.0)))
        assert isinstance(solve(c, "pysat:cadical153"), Sat) == isinstance(solve(c), Sat)


def test_exec_backend_agrees():
    rng = random.Random(78)
    cmd = solver_command()
    for _ in range(5):
        c = random_3cnf(rng, 25, rng.choice((3.0, 5.0)))
        assert isinstance(solve(c, cmd), Sat) == isinstance(solve(c), Sat)


def test_solve_cli(tmp_path, capsys):
    from mpbmc.sat.backends import main

    path = tmp_path / "u.cnf"
    path.write_bytes(b"p cnf 1 2\n1 0\n-1 0\n")
    assert main(["--solver", "embedded", str(path)]) == 20
    assert "s UNSATISFIABLE" in capsys.readouterr().out
