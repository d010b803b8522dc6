"""Runs of 1-safe timed Petri nets sampled on the delta-grid.

A transition enabled at grid instant ``m`` fires at ``m + d`` with
``alpha/delta <= d <= beta/delta`` (for ``beta = inf`` the random policy draws
``d`` up to ``2 alpha/delta``).  Firing toggles ``tau(u)``; a place both
consumed and produced toggles ``eps(p)`` instead of changing ``mu(p)``.
Firings at one instant never share a place.

The run is cut into a lasso at a repeated configuration (marking, toggle
bits, enabling starts, chosen delays).  In random mode choices are random up
to a switch instant and earliest afterwards, which makes the run periodic.
"""

from __future__ import annotations

import random
from typing import Optional

from ..mtl.semantics import Trace
from .net import TimedPetriNet, check_nondegenerate, eps, mu, tau, validate_structure


class SimulationError(RuntimeError):
    pass


class NoLassoWithinBound(SimulationError):
    pass


class DeadlockBeforeBound(SimulationError):
    pass


class UnsafeNet(SimulationError):
    pass


POLICIES = ("random", "earliest")


class _Run:
    def __init__(self, net: TimedPetriNet, delta, policy: str, rng: random.Random, switch: int, start: int):
        self.net = net
        self.policy = policy
        self.rng = rng
        self.switch = switch
        self.start = start
        self.lo = {u: int(net.alpha[u] / delta) for u in net.transitions}
        self.hi = {u: None if net.beta[u] is None else int(net.beta[u] / delta) for u in net.transitions}
        self.marked = frozenset()
        self.eps = {p: True for p in net.places}
        self.tau = {u: True for u in net.transitions}
        self.since: dict[str, int] = {}  # enabling start
        self.delay: dict[str, int] = {}

    def _draw(self, u: str, t: int, least: int) -> int:
        lo, hi = max(self.lo[u], least), self.hi[u]
        if self.policy == "earliest" or t >= self.switch:
            return lo
        top = hi if hi is not None else max(lo, 2 * self.lo[u])
        return self.rng.randint(lo, top)

    def _enabled(self, u: str) -> bool:
        return all(p in self.marked for p in self.net.pre(u))

    def _refresh(self, t: int, touched: set[str]) -> None:
        for u in self.net.transitions:
            pre = self.net.pre(u)
            if not self._enabled(u):
                self.since.pop(u, None)
                self.delay.pop(u, None)
            elif u not in self.since or touched.intersection(pre):
                self.since[u] = t
                self.delay[u] = self._draw(u, t, 0)

    def letter(self) -> frozenset:
        out = {mu(p) for p in self.marked}
        out |= {eps(p) for p, v in self.eps.items() if v}
        out |= {tau(u) for u, v in self.tau.items() if v}
        return frozenset(out)

    def config(self, t: int):
        if t < self.start:
            return ("init", t)
        ages = tuple((u, t - self.since[u], self.delay[u]) for u in sorted(self.since))
        return (self.marked, tuple(sorted(self.eps.items())), tuple(sorted(self.tau.items())), ages)

    def step(self, t: int) -> None:
        """Move to instant ``t``."""
        net = self.net
        if t < self.start:
            return
        if t == self.start:
            self.marked = frozenset(net.initial)
            self._refresh(t, set(net.places))
            return
        due = [u for u in sorted(self.since) if self.since[u] + self.delay[u] == t]
        if self.policy == "random" and t < self.switch:
            self.rng.shuffle(due)
        touched: set[str] = set()
        fired = []
        for u in due:
            places = set(net.pre(u)) | set(net.post(u))
            if places & touched:
                if self._enabled(u) and not touched.intersection(net.pre(u)):
                    hi = self.hi[u]
                    if hi is not None and t - self.since[u] >= hi:
                        raise DeadlockBeforeBound(f"{u} cannot fire by its deadline at instant {t}")
                    self.delay[u] = self._draw(u, t, t - self.since[u] + 1)
                continue
            touched |= places
            fired.append(u)
        marked = set(self.marked)
        for u in fired:
            pre, post = set(net.pre(u)), set(net.post(u))
            for q in post - pre:
                if q in marked:
                    raise UnsafeNet(f"firing {u} at instant {t} marks the already marked place {q}")
            marked -= pre - post
            marked |= post - pre
            for p in pre & post:
                self.eps[p] = not self.eps[p]
            self.tau[u] = not self.tau[u]
        self.marked = frozenset(marked)
        if fired:
            self._refresh(t, touched)


def simulate(net: TimedPetriNet, delta, k: int, policy: str = "random", seed: int = 0,
             t_start: Optional[int] = None) -> Trace:
    """Lasso trace over the net atoms with positions ``0..k``."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    bad = validate_structure(net) + check_nondegenerate(net, delta)
    if bad:
        raise ValueError("net rejected: " + ", ".join(map(str, bad)))
    if k < 1:
        raise ValueError("k must be positive")
    if t_start is None:
        t_start = 2 if policy == "earliest" else random.Random(seed).choice((1, 2))
    if t_start not in (1, 2):
        raise ValueError("t_start must be 1 or 2 grid steps")
    switches = [0] if policy == "earliest" else sorted({k + 1, 3 * (k + 1) // 4, (k + 1) // 2, (k + 1) // 4, 0},
                                                        reverse=True)
    for sw in switches:
        run = _Run(net, delta, policy, random.Random(seed), sw, t_start)
        states, seen = [], {}
        for t in range(k + 2):
            run.step(t)
            c = run.config(t)
            if t == k + 1:
                loop = seen.get(c)
                if loop is not None:
                    return Trace(tuple(states), loop)
                break
            seen.setdefault(c, t)
            states.append(run.letter())
    raise NoLassoWithinBound(f"no repeated configuration closes a lasso at k={k}")
