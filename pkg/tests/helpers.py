"""Shared test fixtures: small nets, random formulas, a direct operator evaluator."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from mpbmc.mtl import formula as F
from mpbmc.mtl.interval import Interval, ival
from mpbmc.mtl.semantics import Trace
from mpbmc.tpn import TimedPetriNet


# ---------------------------------------------------------------- nets


def one_place(alpha=3, beta=5) -> TimedPetriNet:
    """p (marked) -> u; p has no preset."""
    return TimedPetriNet(("p",), ("u",), {("p", "u")}, {"p"}, {"u": alpha}, {"u": beta}, "one")


def p_to_q(alpha=3, beta=6) -> TimedPetriNet:
    """p (marked) -> u -> q."""
    return TimedPetriNet(("p", "q"), ("u",), {("p", "u"), ("u", "q")}, {"p"},
                         {"u": alpha}, {"u": beta}, "pq")


def self_loop(alpha=3, beta=5) -> TimedPetriNet:
    return TimedPetriNet(("p",), ("u",), {("p", "u"), ("u", "p")}, {"p"}, {"u": alpha}, {"u": beta}, "self")


def ring(a1=3, b1=6, a2=3, b2=7) -> TimedPetriNet:
    """p -> u -> q -> v -> p."""
    return TimedPetriNet(("p", "q"), ("u", "v"), {("p", "u"), ("u", "q"), ("q", "v"), ("v", "p")}, {"p"},
                         {"u": a1, "v": a2}, {"u": b1, "v": b2}, "ring")


def conflict(beta=None) -> TimedPetriNet:
    """Two transitions competing for one marked place."""
    return TimedPetriNet(("p", "q", "r"), ("u", "v"), {("p", "u"), ("u", "q"), ("p", "v"), ("v", "r")}, {"p"},
                         {"u": 3, "v": 4}, {"u": beta, "v": beta}, "conf")


# ---------------------------------------------------------------- traces


def all_traces(atoms, k):
    atoms = list(atoms)
    for bits in itertools.product((False, True), repeat=len(atoms) * (k + 1)):
        states = [frozenset(a for j, a in enumerate(atoms) if bits[t * len(atoms) + j]) for t in range(k + 1)]
        for loop in range(k + 1):
            yield Trace(tuple(states), loop)


def random_trace(rng: random.Random, atoms, k) -> Trace:
    states = [frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(k + 1)]
    return Trace(tuple(states), rng.randrange(k + 1))


# ---------------------------------------------------------------- random core formulas


def random_interval(rng: random.Random, max_bound: int, allow_inf: bool = True) -> Interval:
    lo = rng.randint(0, max_bound)
    if allow_inf and rng.random() < 0.2:
        return ival(lo, None, lo_open=rng.random() < 0.3)
    hi = rng.randint(lo, max_bound)
    if lo == hi:
        return Interval.point(lo)
    return ival(lo, hi, rng.random() < 0.3, rng.random() < 0.3)


def random_core(rng: random.Random, atoms, depth: int, max_bound: int) -> F.Formula:
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return F.TRUE if rng.random() < 0.5 else F.FALSE
        return F.Prop(rng.choice(list(atoms)))
    kind = rng.choice(("not", "and", "or", "implies", "iff", "until", "since", "until", "since"))
    sub = lambda: random_core(rng, atoms, depth - 1, max_bound)  # noqa: E731
    if kind == "not":
        return F.Not(sub())
    if kind in ("and", "or"):
        return (F.And if kind == "and" else F.Or)((sub(), sub()))
    if kind == "implies":
        return F.Implies(sub(), sub())
    if kind == "iff":
        return F.Iff(sub(), sub())
    iv = random_interval(rng, max_bound)
    return (F.Until if kind == "until" else F.Since)(iv, sub(), sub())


# ---------------------------------------------------------------- direct evaluator


def _rng(iv: Interval, horizon: int):
    a, b = iv.discrete()
    return range(a, (horizon if b is None else b) + 1)


class Direct:
    """Hand-coded discrete semantics of each operator, without expansion.

    Unbounded future windows are cut at a horizon past which the lasso repeats.
    """

    def __init__(self, trace: Trace):
        self.trace = trace
        self.memo: dict = {}

    def ev(self, f: F.Formula, t: int) -> bool:
        key = (id(f), t)
        v = self.memo.get(key)
        if v is None:
            v = self.memo[key] = self._ev(f, t)
        return v

    def _ev(self, n: F.Formula, t: int) -> bool:
        trace, ev = self.trace, self.ev
        H = t + 2 * (trace.k + 1) + 3
        if isinstance(n, F.Prop):
            return n.name in trace.at(t)
        if isinstance(n, F.Const):
            return n.value
        if isinstance(n, F.Not):
            return not ev(n.arg, t)
        if isinstance(n, F.And):
            return all(ev(a, t) for a in n.args)
        if isinstance(n, F.Or):
            return any(ev(a, t) for a in n.args)
        if isinstance(n, F.Implies):
            return (not ev(n.left, t)) or ev(n.right, t)
        if isinstance(n, F.Iff):
            return ev(n.left, t) == ev(n.right, t)
        if isinstance(n, F.Until):
            return any(ev(n.right, t + d) and all(ev(n.left, t + u) for u in range(d + 1)) for d in _rng(n.interval, H))
        if isinstance(n, F.Since):
            return any(ev(n.right, t - d) and all(ev(n.left, t - u) for u in range(d + 1))
                       for d in _rng(n.interval, t) if d <= t)
        if isinstance(n, F.Release):
            return all(ev(n.right, t + d) or any(ev(n.left, t + u) for u in range(d + 1)) for d in _rng(n.interval, H))
        if isinstance(n, F.Redeem):
            return all(ev(n.right, t - d) or any(ev(n.left, t - u) for u in range(d + 1))
                       for d in _rng(n.interval, t) if d <= t)
        if isinstance(n, F.Diamond):
            return any(ev(n.arg, t + d) for d in _rng(n.interval, H))
        if isinstance(n, F.DiamondP):
            return any(ev(n.arg, t - d) for d in _rng(n.interval, t) if d <= t)
        if isinstance(n, F.Box):
            return all(ev(n.arg, t + d) for d in _rng(n.interval, H))
        if isinstance(n, F.BoxP):
            return all(ev(n.arg, t - d) for d in _rng(n.interval, t) if d <= t)
        if isinstance(n, F.Becomes):
            return t >= 1 and ev(n.before, t - 1) and (ev(n.after, t) or ev(n.after, t + 1))
        if isinstance(n, F.BecomesNext):
            return ev(n.before, t) and ev(n.after, t + 1)
        if isinstance(n, F.Trigger):
            x = [ev(n.arg, u) for u in (t - 1, t, t + 1)] if t >= 1 else None
            return x is not None and (x[0] != x[1] or x[0] != x[2])
        if isinstance(n, F.TriggerL):
            return ev(n.arg, t) != ev(n.arg, t + 1)
        if isinstance(n, F.NoTrigger):
            return t >= 1 and ev(n.arg, t - 1) and (ev(n.arg, t) or ev(n.arg, t + 1))
        if isinstance(n, F.NoTriggerL):
            return ev(n.arg, t) == ev(n.arg, t + 1)
        if isinstance(n, (F.TriggerNext, F.NoTriggerNext)):
            flip = isinstance(n, F.TriggerNext)
            for target in (True, False):
                before = (not target) if flip else target
                past = all(ev(n.arg, t - d) == before for d in (0, 1) if d <= t)
                fut = all((not ev(n.cause, t + d)) or ev(n.arg, t + d) == target for d in (0, 1, 2))
                if past and fut:
                    return True
            return False
        if isinstance(n, F.BigOdot):
            s = trace.at(t)
            return n.chosen <= s and not ((n.universe - n.chosen) & s)
        if isinstance(n, F.AtOrigin):
            return t != 0 or ev(n.arg, t)
        if isinstance(n, F.Alw):
            return all(ev(n.arg, u) for u in range(H))
        raise TypeError(f"no direct rule for {type(n).__name__}")



def direct(trace: Trace, t: int, phi: F.Formula) -> bool:
    return Direct(trace).ev(phi, t)


# intervals used for the operator suite
SUITE_INTERVALS = (
    Interval.closed(0, 1), Interval.closed(1, 2), Interval.point(1), ival(0, 2, True, True),
    ival(1, 3, False, True), Interval.closed(0, None), Interval.unbounded(), Interval.at_least(2),
)


def discrete_operator_suite(p: F.Formula, q: F.Formula) -> list[F.Formula]:
    """One instance per derived operator with a discrete definition."""
    out: list[F.Formula] = []
    for iv in SUITE_INTERVALS:
        out += [F.Release(iv, p, q), F.Redeem(iv, p, q), F.Diamond(iv, p), F.DiamondP(iv, p),
                F.Box(iv, p), F.BoxP(iv, p)]
    out += [F.Becomes(F.Not(p), p), F.Becomes(p, q), F.BecomesNext(F.Not(p), p), F.BecomesNext(p, q),
            F.Trigger(p), F.TriggerL(p), F.NoTrigger(p), F.NoTriggerL(p),
            F.TriggerNext(q, p), F.NoTriggerNext(q, p), F.Alw(p), F.AtOrigin(p)]
    if isinstance(p, F.Prop) and isinstance(q, F.Prop):
        out += [F.BigOdot({p.name}, {p.name, q.name}), F.BigOdot(set(), {p.name, q.name})]
    return out


def frac(x) -> Fraction:
    return Fraction(x)


def effective_bound(phi: F.Formula) -> int:
    """Largest discrete window end (or start, when unbounded) over the formula."""
    best = 0
    if isinstance(phi, (F.Until, F.Since)):
        a, b = phi.interval.discrete()
        best = a if b is None else b
    return max([best] + [effective_bound(c) for c in phi.children()])


def random_family(seed: int, max_bits: int = 15):
    """(atoms, k, phi) from the certification family: at most 3 atoms, k <= 6,
    bounds <= min(4, k), depth <= 3; resampled until the bounds fit."""
    rng = random.Random(seed)
    atoms = ["p", "q", "r"][: rng.randint(1, 3)]
    k = rng.randint(0, 6)
    while len(atoms) * (k + 1) > max_bits:
        k -= 1
    while True:
        phi = random_core(rng, atoms, 3, min(4, k))
        if effective_bound(phi) <= k:
            return atoms, k, phi
