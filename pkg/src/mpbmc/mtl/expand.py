"""Time domains, granularity, and expansion of derived operators."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import formula as F
from .formula import TRUE, FALSE, Not, And, Or, Implies, Until, Since
from .interval import UNBOUNDED, Interval


@dataclass(frozen=True)
class Discrete:
    def __str__(self):
        return "N"


@dataclass(frozen=True)
class Continuous:
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def __str__(self):
        return f"R(delta={self.delta})"


TimeDomain = Union[Discrete, Continuous]
DISCRETE = Discrete()


class UnsupportedInDomain(ValueError):
    pass


def metric_bounds(phi: F.Formula) -> set[Fraction]:
    out: set[Fraction] = set()
    for iv in F.intervals(phi):
        out |= iv.bounds()
    return out


def granularity_admissible(delta, phi: F.Formula) -> bool:
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    return all((b / delta).denominator == 1 for b in metric_bounds(phi))


_CLOSED_01 = Interval.closed(0, 1)
_CLOSED_02 = Interval.closed(0, 2)


def _continuous_only(node, dom):
    if not isinstance(dom, Continuous):
        raise UnsupportedInDomain(f"{type(node).__name__} is defined over continuous time only")


def unfold(node: F.Formula, dom: TimeDomain) -> F.Formula:
    """One application of the defining row for a derived ``node``."""
    t = type(node)
    nat = isinstance(dom, Discrete)
    if t is F.BigOdot:
        pos = [F.Prop(x) for x in sorted(node.chosen)]
        neg = [Not(F.Prop(y)) for y in sorted(node.universe - node.chosen)]
        return F.conj(*pos, *neg)
    if t is F.Release:
        return Not(Until(node.interval, Not(node.left), Not(node.right)))
    if t is F.Redeem:
        return Not(Since(node.interval, Not(node.left), Not(node.right)))
    if t is F.Diamond:
        return Until(node.interval, TRUE, node.arg)
    if t is F.DiamondP:
        return Since(node.interval, TRUE, node.arg)
    if t is F.Box:
        return F.Release(node.interval, FALSE, node.arg)
    if t is F.BoxP:
        return F.Redeem(node.interval, FALSE, node.arg)
    if t is F.NowOnStrict:
        _continuous_only(node, dom)
        f = node.arg
        return Or((Until(UNBOUNDED, f, TRUE), And((Not(f), F.Release(UNBOUNDED, f, FALSE)))))
    if t is F.UpToNowStrict:
        _continuous_only(node, dom)
        f = node.arg
        return Or((Since(UNBOUNDED, f, TRUE), And((Not(f), F.Redeem(UNBOUNDED, f, FALSE)))))
    if t is F.NowOn:
        _continuous_only(node, dom)
        return And((node.arg, F.NowOnStrict(node.arg)))
    if t is F.UpToNow:
        _continuous_only(node, dom)
        return And((node.arg, F.UpToNowStrict(node.arg)))
    if t is F.Becomes:
        if nat:
            return And((F.DiamondP(Interval.point(1), node.before), F.Diamond(_CLOSED_01, node.after)))
        return And((F.UpToNowStrict(node.before), Or((node.after, F.NowOnStrict(node.after)))))
    if t is F.BecomesNext:
        step = Interval.point(1) if nat else Interval.point(dom.delta)
        return And((node.before, F.Diamond(step, node.after)))
    if t is F.Trigger:
        return Or((F.becomes(node.arg), F.becomes(Not(node.arg))))
    if t is F.TriggerL:
        return Or((F.becomes_l(node.arg), F.becomes_l(Not(node.arg))))
    if t is F.NoTrigger:
        return F.Becomes(node.arg, node.arg)
    if t is F.NoTriggerL:
        f = node.arg
        return Or((F.BecomesNext(f, f), F.BecomesNext(Not(f), Not(f))))
    if t in (F.TriggerNext, F.NoTriggerNext):
        c, f = node.cause, node.arg
        # TriggerNext starts from the value opposite to the one it forces
        first, second = (Not(f), f) if t is F.TriggerNext else (f, Not(f))
        if nat:
            return Or((
                And((F.BoxP(_CLOSED_01, first), F.Box(_CLOSED_02, Implies(c, f)))),
                And((F.BoxP(_CLOSED_01, second), F.Box(_CLOSED_02, Implies(c, Not(f))))),
            ))
        step = Interval.point(dom.delta)
        return Or((
            And((F.UpToNowStrict(first), F.Box(step, Implies(c, f)))),
            And((F.UpToNowStrict(second), F.Box(step, Implies(c, Not(f))))),
        ))
    if t is F.Alw:
        f = node.arg
        return And((f, F.Box(UNBOUNDED, f), F.BoxP(UNBOUNDED, f)))
    if t is F.AtOrigin:
        guard = Interval.at_least(1) if nat else UNBOUNDED
        return Implies(F.BoxP(guard, FALSE), node.arg)
    raise TypeError(f"{t.__name__} is not a derived operator")


def expand_derived(phi: F.Formula, dom: TimeDomain = DISCRETE, keep_alw: bool = False) -> F.Formula:
    """Rewrite every derived node into core form.

    With ``keep_alw`` the ``Alw`` closure is left in place for consumers that
    evaluate it natively (its children are still expanded).
    """
    memo: dict[int, tuple[F.Formula, F.Formula]] = {}
    limit = sys.getrecursionlimit()
    if limit < 20000:
        sys.setrecursionlimit(20000)

    def go(node: F.Formula) -> F.Formula:
        key = id(node)
        hit = memo.get(key)
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, F.CORE_TYPES) or (keep_alw and isinstance(node, F.Alw)):
            out = F.map_children(node, go)
        else:
            out = go(unfold(node, dom))
        memo[key] = (node, out)
        return out

    return go(phi)
