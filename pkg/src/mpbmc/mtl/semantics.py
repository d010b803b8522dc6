"""Discrete-time pointwise semantics over ultimately periodic traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import formula as F


@dataclass(frozen=True)
class Trace:
    """Lasso ``states[0..k]`` whose suffix from ``loop`` repeats forever."""

    states: tuple[frozenset, ...]
    loop: int

    def __post_init__(self):
        states = tuple(frozenset(s) for s in self.states)
        object.__setattr__(self, "states", states)
        if not states:
            raise ValueError("a trace needs at least one state")
        if not 0 <= self.loop < len(states):
            raise ValueError(f"loop index {self.loop} outside [0, {len(states) - 1}]")

    @classmethod
    def of(cls, states: Iterable[Iterable[str]], loop: int) -> "Trace":
        return cls(tuple(frozenset(s) for s in states), loop)

    @property
    def k(self) -> int:
        return len(self.states) - 1

    @property
    def period(self) -> int:
        return len(self.states) - self.loop

    def index(self, t: int) -> int:
        if t <= self.k:
            return t
        return self.loop + (t - self.loop) % self.period

    def at(self, t: int) -> frozenset:
        return self.states[self.index(t)]

    def padded(self, extra: int) -> "Trace":
        """Same infinite behavior, represented with ``extra`` more states."""
        states = [self.at(t) for t in range(len(self.states) + extra)]
        return Trace(tuple(states), self.loop + extra)

    def pretty(self) -> str:
        lines = []
        for t, s in enumerate(self.states):
            mark = " <- loop" if t == self.loop else ""
            lines.append(f"{t:4d}: {{{', '.join(sorted(s))}}}{mark}")
        return "\n".join(lines)


def stabilization(phi: F.Formula, period: int) -> int:
    """Offset after the loop start from which ``phi`` is periodic.

    Future operators add nothing; a bounded past window adds its upper bound;
    an unbounded past window adds its lower bound plus one period.
    """
    memo: dict[int, int] = {}

    def go(n):
        key = id(n)
        if key in memo:
            return memo[key]
        if isinstance(n, (F.Prop, F.Const, F.Alw)):
            out = 0
        else:
            c = max((go(ch) for ch in n.children()), default=0)
            if isinstance(n, F.Since):
                a, b = n.interval.discrete()
                out = c + (a + period if b is None else max(b, 0))
            else:
                out = c
        memo[key] = out
        return out

    return go(phi)


class Evaluator:
    """Memoized evaluation of a core formula on one trace."""

    def __init__(self, trace: Trace):
        self.trace = trace
        self.memo: dict[tuple[int, int], bool] = {}
        self.stab: dict[int, int] = {}
        self.keep: list = []

    def _s(self, node) -> int:
        s = self.stab.get(id(node))
        if s is None:
            s = stabilization(node, self.trace.period)
            self.stab[id(node)] = s
            self.keep.append(node)
        return s

    def _canon(self, node, t: int) -> int:
        tr = self.trace
        start = tr.loop + self._s(node)
        if t >= start + tr.period:
            t = start + (t - start) % tr.period
        return t

    def val(self, node: F.Formula, t: int) -> bool:
        if t < 0:
            raise ValueError("negative instant")
        typ = type(node)
        if typ is F.Prop:
            return node.name in self.trace.at(t)
        if typ is F.Const:
            return node.value
        t = self._canon(node, t)
        key = (id(node), t)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.keep.append(node)
        out = self._compute(node, t)
        self.memo[key] = out
        return out

    def _compute(self, node, t: int) -> bool:
        typ = type(node)
        v = self.val
        if typ is F.Not:
            return not v(node.arg, t)
        if typ is F.And:
            return all(v(a, t) for a in node.args)
        if typ is F.Or:
            return any(v(a, t) for a in node.args)
        if typ is F.Implies:
            return (not v(node.left, t)) or v(node.right, t)
        if typ is F.Iff:
            return v(node.left, t) == v(node.right, t)
        if typ is F.Until:
            f, g = node.left, node.right
            a, b = node.interval.discrete()
            if b is None:
                c = max(self._s(f), self._s(g))
                # past this point every position repeats one already visited
                b = max(t + a, self.trace.loop + c) + self.trace.period - t
            if a > b:
                return False
            for u in range(0, a):
                if not v(f, t + u):
                    return False
            for d in range(a, b + 1):
                if not v(f, t + d):
                    return False
                if v(g, t + d):
                    return True
            return False
        if typ is F.Since:
            f, g = node.left, node.right
            a, b = node.interval.discrete()
            hi = t if b is None else min(b, t)
            if a > hi:
                return False
            for u in range(0, a):
                if not v(f, t - u):
                    return False
            for d in range(a, hi + 1):
                if not v(f, t - d):
                    return False
                if v(g, t - d):
                    return True
            return False
        if typ is F.Alw:
            return holds_globally(self.trace, node.arg, self)
        raise TypeError(f"{typ.__name__} is not a core node; expand it first")


def eval_at(trace: Trace, t: int, phi: F.Formula) -> bool:
    return Evaluator(trace).val(phi, t)


def valuation_horizon(trace: Trace, phi: F.Formula) -> int:
    """Number of leading instants after which every subformula valuation of
    ``phi`` repeats with the trace's period."""
    return trace.loop + stabilization(phi, trace.period) + trace.period


def holds_globally(trace: Trace, phi: F.Formula, evaluator: Evaluator | None = None,
                   horizon: int | None = None) -> bool:
    ev = evaluator or Evaluator(trace)
    h = valuation_horizon(trace, phi) if horizon is None else horizon
    return all(ev.val(phi, t) for t in range(h))


def first_violation(trace: Trace, phi: F.Formula) -> int | None:
    ev = Evaluator(trace)
    for t in range(valuation_horizon(trace, phi)):
        if not ev.val(phi, t):
            return t
    return None
