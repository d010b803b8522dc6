"""Conflict-driven clause-learning SAT solver.

Two watched literals per clause, first-UIP learning with recursive-free
clause minimization, VSIDS-style activities, phase saving, geometric
restarts, and periodic deletion of long learnt clauses.

Constants (all fixed; the seed only perturbs initial activities):
    RESTART_FIRST = 100 conflicts, RESTART_GROWTH = 1.5
    VAR_DECAY = 0.95, LEARNT_FRACTION = 1/3 of the problem clauses
"""

from __future__ import annotations

import heapq
import random
import time
from typing import Optional

from .cnf import CnfInstance, Sat, SolveResult, Unknown, Unsat

RESTART_FIRST = 100
RESTART_GROWTH = 1.5
VAR_DECAY = 0.95
LEARNT_FRACTION = 1 / 3
LEARNT_GROWTH = 1.1


class CDCLSolver:
    def __init__(self, cnf: CnfInstance, seed: int = 0):
        self.cnf = cnf
        n = cnf.num_vars
        self.n = n
        self.val = [0] * (n + 1)  # +1 true, -1 false, 0 unassigned
        self.level = [0] * (n + 1)
        self.reason: list[Optional[list[int]]] = [None] * (n + 1)
        self.phase = [False] * (n + 1)
        rng = random.Random(seed)
        self.activity = [rng.random() * 1e-5 for _ in range(n + 1)]
        self.var_inc = 1.0
        self.watches: list[list[list[int]]] = [[] for _ in range(2 * n + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.learnts: list[list[int]] = []
        self.seen = [False] * (n + 1)
        self.heap = [(-self.activity[v], v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)
        self.ok = True
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self._load()

    @staticmethod
    def _w(lit: int) -> int:
        return lit << 1 if lit > 0 else ((-lit) << 1) | 1

    def _value(self, lit: int) -> int:
        v = self.val[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def _load(self) -> None:
        if self.cnf.has_empty_clause:
            self.ok = False
            return
        units = []
        for c in self.cnf.iter_clauses():
            if len(c) == 1:
                units.append(c[0])
            else:
                self.watches[self._w(c[0])].append(c)
                self.watches[self._w(c[1])].append(c)
        # top-level units are asserted before search
        for u in units:
            v = self._value(u)
            if v == -1:
                self.ok = False
                return
            if v == 0:
                self._enqueue(u, None)
        if self._propagate() is not None:
            self.ok = False

    def _enqueue(self, lit: int, reason) -> None:
        v = lit if lit > 0 else -lit
        self.val[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        val = self.val
        watches = self.watches
        trail = self.trail
        w = self._w
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -p
            ws = watches[w(false_lit)]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                fv = val[first] if first > 0 else -val[-first]
                if fv == 1:
                    ws[j] = c
                    j += 1
                    continue
                for kk in range(2, len(c)):
                    lit = c[kk]
                    lv = val[lit] if lit > 0 else -val[-lit]
                    if lv != -1:
                        c[1] = lit
                        c[kk] = false_lit
                        watches[w(lit)].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if fv == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return c
                    v = first if first > 0 else -first
                    val[v] = 1 if first > 0 else -1
                    self.level[v] = len(self.trail_lim)
                    self.reason[v] = c
                    trail.append(first)
            del ws[j:]
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.n + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if self.val[u] == 0]
            heapq.heapify(self.heap)
        if self.val[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen = self.seen
        level = self.level
        dl = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        path = 0
        p = 0
        idx = len(self.trail) - 1
        while True:
            start = 0 if p == 0 else 1
            for q in confl[start:] if start else confl:
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    to_clear.append(v)
                    self._bump(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while True:
                lit = self.trail[idx]
                idx -= 1
                if seen[lit if lit > 0 else -lit]:
                    break
            p = lit
            pv = p if p > 0 else -p
            confl = self.reason[pv]
            seen[pv] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = -p
        # drop literals implied by other literals of the clause
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = self.reason[abs(q)]
            if r is None:
                keep.append(q)
                continue
            if all(seen[abs(x)] or level[abs(x)] == 0 for x in r[1:]):
                continue
            keep.append(q)
        learnt = keep
        for v in to_clear:
            seen[v] = False
        if len(learnt) == 1:
            back = 0
        else:
            best = 1
            for i in range(2, len(learnt)):
                if level[abs(learnt[i])] > level[abs(learnt[best])]:
                    best = i
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[abs(learnt[1])]
        return learnt, back

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        val, phase, act = self.val, self.phase, self.activity
        heap = self.heap
        for i in range(len(self.trail) - 1, stop - 1, -1):
            lit = self.trail[i]
            v = lit if lit > 0 else -lit
            phase[v] = lit > 0
            val[v] = 0
            self.reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int:
        heap, val, act = self.heap, self.val, self.activity
        while heap:
            na, v = heapq.heappop(heap)
            if val[v] == 0 and -na == act[v]:
                return v if self.phase[v] else -v
        for v in range(1, self.n + 1):
            if val[v] == 0:
                return v if self.phase[v] else -v
        return 0

    def _reduce_db(self) -> None:
        locked = set()
        for lit in self.trail:
            r = self.reason[abs(lit)]
            if r is not None:
                locked.add(id(r))
        self.learnts.sort(key=len)
        half = len(self.learnts) // 2
        removed = set()
        kept = self.learnts[:half]
        for c in self.learnts[half:]:
            if len(c) > 2 and id(c) not in locked:
                removed.add(id(c))
            else:
                kept.append(c)
        self.learnts = kept
        if removed:
            for ws in self.watches:
                if ws:
                    ws[:] = [c for c in ws if id(c) not in removed]

    def solve(self, timeout: Optional[float] = None, conflict_limit: Optional[int] = None) -> SolveResult:
        if not self.ok:
            return Unsat()
        deadline = None if timeout is None else time.monotonic() + timeout
        restart_at = RESTART_FIRST
        since_restart = 0
        max_learnts = max(1000, int(self.cnf.num_clauses * LEARNT_FRACTION))
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    return Unsat()
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[self._w(learnt[0])].append(learnt)
                    self.watches[self._w(learnt[1])].append(learnt)
                    self.learnts.append(learnt)
                    self._enqueue(learnt[0], learnt)
                self.var_inc /= VAR_DECAY
                if conflict_limit is not None and self.conflicts >= conflict_limit:
                    return Unknown("conflict limit")
                if deadline is not None and self.conflicts % 64 == 0 and time.monotonic() > deadline:
                    return Unknown("timeout")
                continue
            if since_restart >= restart_at:
                since_restart = 0
                restart_at = int(restart_at * RESTART_GROWTH)
                self._cancel_until(0)
                continue
            if len(self.learnts) - len(self.trail) >= max_learnts:
                self._reduce_db()
                max_learnts = int(max_learnts * LEARNT_GROWTH)
            lit = self._pick()
            if lit == 0:
                model = [False] * (self.n + 1)
                for v in range(1, self.n + 1):
                    model[v] = self.val[v] == 1
                if not self.cnf.check(model):
                    raise AssertionError("solver produced an assignment violating a clause")
                return Sat(tuple(model))
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)


def solve(cnf: CnfInstance, timeout: Optional[float] = None, seed: int = 0) -> SolveResult:
    return CDCLSolver(cnf, seed).solve(timeout=timeout)
