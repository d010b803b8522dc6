"""Bounded satisfiability of discrete-time MTL over lasso traces.

A candidate trace has states ``0..k`` and a loop start selected by exactly one
of the variables ``L_0..L_k``.  Every subformula ``n`` is encoded as a column
of literals for positions ``0..k + s(n)`` where ``s(n)`` is its stabilization
offset computed with the largest possible period ``k + 1``: for any loop start
``l`` the value of ``n`` is periodic from ``l + s(n)`` on with period
``k + 1 - l``.  A position beyond the column is folded back through the loop
selectors, which makes the encoding exact for both future and past operators.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .mtl import formula as F
from .mtl.semantics import Evaluator, Trace, eval_at, holds_globally
from .sat import PropositionalGraph, TRUE, FALSE, tseitin_map
from .sat import backends
from .sat.cnf import Sat, Unknown

PROP, CONST, NOT, AND, OR, IFF, UNTIL, SINCE, ALW, ATLEAST = range(10)


class BoundTooLarge(ValueError):
    def __init__(self, bound: int, k: int):
        super().__init__(f"metric bound {bound} exceeds k = {k}")
        self.bound = bound
        self.k = k


class NonCoreFormula(TypeError):
    pass


class WitnessValidationError(AssertionError):
    """The decoded trace disagrees with the direct semantics (encoder bug)."""


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class KSat:
    trace: Trace
    stats: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class KUnsat:
    stats: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class KValid:
    stats: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class KCounterexample:
    trace: Trace
    stats: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class KUnknown:
    reason: str = "timeout"
    stats: dict = field(default_factory=dict, compare=False)


Verdict = Union[KSat, KUnsat, KValid, KCounterexample, KUnknown]


# ---------------------------------------------------------------- DAG


class _Dag:
    """Hash-consed integer DAG of a core formula with light constant folding."""

    def __init__(self, k: int):
        self.k = k
        self.op: list[int] = []
        self.arg: list = []  # name, bool, or (a, b|None)
        self.kids: list[tuple[int, ...]] = []
        self.s: list[int] = []
        self.table: dict = {}
        self.memo: dict[int, tuple] = {}
        self.max_bound = 0
        self.true = self._mk(CONST, True, ())
        self.false = self._mk(CONST, False, ())

    def _mk(self, op, arg, kids) -> int:
        key = (op, arg, kids)
        n = self.table.get(key)
        if n is not None:
            return n
        n = len(self.op)
        self.op.append(op)
        self.arg.append(arg)
        self.kids.append(kids)
        cs = max((self.s[c] for c in kids), default=0)
        if op == SINCE:
            a, b = arg
            cs += a + (self.k + 1) if b is None else b
        elif op == ATLEAST:
            cs = arg
        elif op == ALW:
            cs = 0
        self.s.append(cs)
        self.table[key] = n
        return n

    def const(self, n) -> Optional[bool]:
        return self.arg[n] if self.op[n] == CONST else None

    def not_(self, x):
        if self.op[x] == CONST:
            return self.false if self.arg[x] else self.true
        if self.op[x] == NOT:
            return self.kids[x][0]
        return self._mk(NOT, None, (x,))

    def nary(self, op, xs):
        absorb, unit = (self.false, self.true) if op == AND else (self.true, self.false)
        out = []
        for x in xs:
            if x == absorb:
                return absorb
            if x == unit:
                continue
            if self.op[x] == op:
                out.extend(self.kids[x])
            else:
                out.append(x)
        out = sorted(set(out))
        if not out:
            return unit
        if len(out) == 1:
            return out[0]
        return self._mk(op, None, tuple(out))

    def until(self, ab, f, g):
        if g == self.false:
            return self.false
        if f == self.true and g == self.true:
            return self.true
        return self._mk(UNTIL, ab, (f, g))

    def since(self, ab, f, g):
        if g == self.false:
            return self.false
        if f == self.true and g == self.true:
            # some instant at distance >= a exists iff t >= a
            return self._mk(ATLEAST, ab[0], ()) if ab[0] > 0 else self.true
        return self._mk(SINCE, ab, (f, g))

    def build(self, phi: F.Formula) -> int:
        stack = [(phi, False)]
        memo = self.memo
        while stack:
            node, ready = stack.pop()
            if id(node) in memo and memo[id(node)][0] is node:
                continue
            ch = node.children()
            if not ready:
                stack.append((node, True))
                for c in ch:
                    if not (id(c) in memo and memo[id(c)][0] is c):
                        stack.append((c, False))
                continue
            memo[id(node)] = (node, self._convert(node, [memo[id(c)][1] for c in ch]))
        return memo[id(phi)][1]

    def _convert(self, node, ch) -> int:
        t = type(node)
        if t is F.Prop:
            return self._mk(PROP, node.name, ())
        if t is F.Const:
            return self.true if node.value else self.false
        if t is F.Not:
            return self.not_(ch[0])
        if t is F.And:
            return self.nary(AND, ch)
        if t is F.Or:
            return self.nary(OR, ch)
        if t is F.Implies:
            return self.nary(OR, [self.not_(ch[0]), ch[1]])
        if t is F.Iff:
            a, b = ch
            if self.const(a) is not None:
                return b if self.const(a) else self.not_(b)
            if self.const(b) is not None:
                return a if self.const(b) else self.not_(a)
            return self._mk(IFF, None, tuple(sorted((a, b))))
        if t in (F.Until, F.Since):
            a, b = node.interval.discrete()
            if b is not None and a > b:
                return self.false
            self.max_bound = max(self.max_bound, a if b is None else b)
            return (self.until if t is F.Until else self.since)((a, b), ch[0], ch[1])
        if t is F.Alw:
            x = ch[0]
            if self.const(x) is not None:
                return x
            # the closure of a conjunction is the conjunction of closures
            parts = self.kids[x] if self.op[x] == AND else (x,)
            return self.nary(AND, [p if self.op[p] == ALW else self._mk(ALW, None, (p,)) for p in parts])
        raise NonCoreFormula(f"{t.__name__} is not a core node; expand it first")


# ---------------------------------------------------------------- encoder


@dataclass
class Encoding:
    graph: PropositionalGraph
    k: int
    atoms: tuple[str, ...]
    diagnostics: list[str]
    horizon: int


class _Encoder:
    def __init__(self, dag: _Dag, atoms: Iterable[str], k: int):
        self.dag = dag
        self.k = k
        self.g = PropositionalGraph()
        g = self.g
        self.loops = [g.var(("loop", l)) for l in range(k + 1)]
        self.atoms = tuple(sorted(set(atoms)))
        for p in self.atoms:
            for t in range(k + 1):
                g.var(("atom", p, t))
        # exactly one loop start, at-most-one via a prefix chain
        g.assert_(g.or_(self.loops))
        seen = FALSE
        for l, x in enumerate(self.loops):
            if l:
                g.assert_(-g.and2(x, seen))
            seen = g.or2(seen, x)
        self.cols: dict[int, list[int]] = {}
        self.wrapped: dict[tuple[int, int], int] = {}

    def horizon(self, n: int) -> int:
        return self.k + self.dag.s[n]

    def get(self, n: int, t: int) -> int:
        dag = self.dag
        op = dag.op[n]
        if op == CONST:
            return TRUE if dag.arg[n] else FALSE
        if op == ATLEAST:
            return TRUE if t >= dag.arg[n] else FALSE
        if op == ALW:
            return self.column(n)[0]
        if op == PROP and t <= self.k:
            return self.g.var(("atom", dag.arg[n], t))
        h = self.horizon(n)
        if t <= h:
            return self.column(n)[t]
        key = (n, t)
        lit = self.wrapped.get(key)
        if lit is None:
            lit = self.g.or_(self.g.and2(L, self.get(n, self._fold(n, t, l))) for l, L in enumerate(self.loops))
            self.wrapped[key] = lit
        return lit

    def _fold(self, n: int, t: int, l: int) -> int:
        start = l + self.dag.s[n]
        return start + (t - start) % (self.k + 1 - l)

    def column(self, n: int) -> list[int]:
        col = self.cols.get(n)
        if col is None:
            # children first, iteratively, to keep the recursion shallow
            order, stack = [], [n]
            while stack:
                x = stack.pop()
                if x in self.cols or self.dag.op[x] in (CONST, ATLEAST):
                    continue
                order.append(x)
                stack.extend(self.dag.kids[x])
            for x in reversed(order):
                if x not in self.cols:
                    self.cols[x] = self._compute(x)
            col = self.cols[n]
        return col

    def _compute(self, n: int) -> list[int]:
        dag, g, get = self.dag, self.g, self.get
        op, kids = dag.op[n], dag.kids[n]
        H = self.horizon(n)
        rng = range(H + 1)
        if op == PROP:
            return [get(n, t) for t in range(self.k + 1)]
        if op == NOT:
            return [-get(kids[0], t) for t in rng]
        if op == AND:
            return [g.and_(get(c, t) for c in kids) for t in rng]
        if op == OR:
            return [g.or_(get(c, t) for c in kids) for t in rng]
        if op == IFF:
            return [g.iff(get(kids[0], t), get(kids[1], t)) for t in rng]
        if op == ALW:
            c = kids[0]
            return [g.and_(get(c, t) for t in range(self.horizon(c) + 1))]
        f, h = kids
        a, b = dag.arg[n]
        if op == UNTIL:
            if b is not None:
                return [self._bounded_until(f, h, t, a, b) for t in rng]
            if a > 0:
                u0 = dag.until((0, None), f, h)
                return [g.and_([get(f, t + u) for u in range(a)] + [get(u0, t + a)]) for t in rng]
            return self._unbounded_until(f, h, H)
        if b is not None:
            return [self._bounded_since(f, h, t, a, b) for t in rng]
        if a > 0:
            s0 = dag.since((0, None), f, h)
            return [FALSE if t < a else
                    g.and_([get(f, t - u) for u in range(a)] + [get(s0, t - a)]) for t in rng]
        out, prev = [], FALSE
        for t in rng:
            prev = g.and2(get(f, t), g.or2(get(h, t), prev))
            out.append(prev)
        return out

    def _bounded_until(self, f, h, t, a, b) -> int:
        g, get = self.g, self.get
        acc = FALSE
        for d in range(b, a - 1, -1):
            acc = g.and2(get(f, t + d), g.or2(get(h, t + d), acc))
        return g.and_([get(f, t + u) for u in range(a)] + [acc])

    def _bounded_since(self, f, h, t, a, b) -> int:
        g, get = self.g, self.get
        if a > t:
            return FALSE
        acc = FALSE
        for d in range(min(b, t), a - 1, -1):
            acc = g.and2(get(f, t - d), g.or2(get(h, t - d), acc))
        return g.and_([get(f, t - u) for u in range(a)] + [acc])

    def _unbounded_until(self, f, h, H) -> list[int]:
        g, get = self.g, self.get
        s = self.dag.s[f] if self.dag.s[f] > self.dag.s[h] else self.dag.s[h]
        # one pass over a full period from l + s decides the value there
        aux = [FALSE] * (H + 2)
        for t in range(H, s - 1, -1):
            aux[t] = g.and2(get(f, t), g.or2(get(h, t), aux[t + 1]))
        nxt = g.or_(g.and2(L, aux[l + s]) for l, L in enumerate(self.loops))
        out = [FALSE] * (H + 1)
        for t in range(H, -1, -1):
            nxt = g.and2(get(f, t), g.or2(get(h, t), nxt))
            out[t] = nxt
        return out


def _prepare(phi: F.Formula, atoms, k: int):
    if k < 0:
        raise ValueError("k must be non-negative")
    dag = _Dag(k)
    root = dag.build(phi)
    if dag.max_bound > k:
        raise BoundTooLarge(dag.max_bound, k)
    diags = []
    if k < 2 * dag.max_bound:
        diags.append(f"k = {k} is below twice the largest metric bound {dag.max_bound}; "
                     "lassos with short loops dominate the search")
    all_atoms = set(atoms or ()) | F.atoms(phi)
    enc = _Encoder(dag, all_atoms, k)
    return dag, root, enc, diags


def encode(phi: F.Formula, atoms: Iterable[str] = (), k: int = 0) -> Encoding:
    """Graph satisfiable iff some lasso with ``k + 1`` states satisfies ``phi``
    at position 0."""
    dag, root, enc, diags = _prepare(phi, atoms, k)
    enc.g.assert_(enc.get(root, 0))
    return Encoding(enc.g, k, enc.atoms, diags, enc.horizon(root))


def encode_violation(phi: F.Formula, atoms: Iterable[str] = (), k: int = 0) -> Encoding:
    """Graph satisfiable iff some lasso violates ``phi`` at some position."""
    dag, root, enc, diags = _prepare(phi, atoms, k)
    H = enc.horizon(root)
    enc.g.assert_(enc.g.or_(-enc.get(root, t) for t in range(H + 1)))
    return Encoding(enc.g, k, enc.atoms, diags, H)


def decode(encoding: Encoding, node_var: dict[int, int], model) -> Trace:
    g = encoding.graph

    def value(key) -> bool:
        node = g.keys.get(key)
        v = node_var.get(node) if node is not None else None
        return bool(v is not None and v < len(model) and model[v])

    states = [frozenset(p for p in encoding.atoms if value(("atom", p, t))) for t in range(encoding.k + 1)]
    loops = [l for l in range(encoding.k + 1) if value(("loop", l))]
    if len(loops) != 1:
        raise WitnessValidationError(f"model selects loop starts {loops}")
    return Trace(tuple(states), loops[0])


def _run(encoding: Encoding, solver: str, timeout: Optional[float], seed: int):
    stats = {"diagnostics": list(encoding.diagnostics), "graph_nodes": encoding.graph.num_nodes}
    t0 = time.perf_counter()
    tm = tseitin_map(encoding.graph)
    stats["cnf_time"] = time.perf_counter() - t0
    stats["vars"] = tm.cnf.num_vars
    stats["clauses"] = tm.cnf.num_clauses
    t0 = time.perf_counter()
    res = backends.solve(tm.cnf, solver, timeout=timeout, seed=seed)
    stats["solve_time"] = time.perf_counter() - t0
    trace = decode(encoding, tm.node_var, res.assignment) if isinstance(res, Sat) else None
    return res, trace, stats, tm.cnf


def check_satisfiable(phi: F.Formula, k: int, atoms: Iterable[str] = (), solver: str = "embedded",
                      timeout: Optional[float] = None, seed: int = 0, validate: bool = True,
                      keep_cnf: bool = False) -> Verdict:
    t0 = time.perf_counter()
    enc = encode(phi, atoms, k)
    build = time.perf_counter() - t0
    res, trace, stats, cnf = _run(enc, solver, timeout, seed)
    stats["build_time"] = build
    if keep_cnf:
        stats["cnf"] = cnf
    if isinstance(res, Unknown):
        return KUnknown(res.reason, stats)
    if trace is None:
        return KUnsat(stats)
    if validate and not eval_at(trace, 0, phi):
        raise WitnessValidationError(f"decoded witness does not satisfy the formula:\n{trace.pretty()}")
    return KSat(trace, stats)


def check_valid(phi: F.Formula, k: int, atoms: Iterable[str] = (), solver: str = "embedded",
                timeout: Optional[float] = None, seed: int = 0, validate: bool = True,
                keep_cnf: bool = False) -> Verdict:
    """KValid iff every lasso with ``k + 1`` states satisfies ``phi`` at
    every position."""
    t0 = time.perf_counter()
    enc = encode_violation(phi, atoms, k)
    build = time.perf_counter() - t0
    res, trace, stats, cnf = _run(enc, solver, timeout, seed)
    stats["build_time"] = build
    if keep_cnf:
        stats["cnf"] = cnf
    if isinstance(res, Unknown):
        return KUnknown(res.reason, stats)
    if trace is None:
        return KValid(stats)
    if validate and holds_globally(trace, phi, Evaluator(trace)):
        raise WitnessValidationError(f"decoded counterexample satisfies the formula:\n{trace.pretty()}")
    return KCounterexample(trace, stats)
