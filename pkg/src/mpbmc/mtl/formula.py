"""MTL abstract syntax.

Core nodes are propositions, constants, boolean connectives, ``Until`` and
``Since``.  Every other node is a derived operator that :func:`expand_derived`
rewrites into core form, parametrically in the time domain.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterator

from .interval import UNBOUNDED, Interval


class Formula:
    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return tuple(getattr(self, f.name) for f in fields(self) if _is_child_field(self, f.name))

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        from .printer import pretty

        return pretty(self)


def _is_child_field(node: Formula, name: str) -> bool:
    return name not in ("interval", "name", "value", "chosen", "universe")


@dataclass(frozen=True, slots=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple[Formula, ...]

    def children(self):
        return self.args


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def children(self):
        return self.args


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Since(Formula):
    interval: Interval
    left: Formula
    right: Formula


# ---------------------------------------------------------------- derived


@dataclass(frozen=True, slots=True)
class Release(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Redeem(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Diamond(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True, slots=True)
class DiamondP(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True, slots=True)
class BoxP(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True, slots=True)
class NowOnStrict(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class UpToNowStrict(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class NowOn(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class UpToNow(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class Becomes(Formula):
    """Switch from ``before`` to ``after`` regardless of the current value."""

    before: Formula
    after: Formula


@dataclass(frozen=True, slots=True)
class BecomesNext(Formula):
    """Switch with ``before`` holding now and ``after`` in the immediate future."""

    before: Formula
    after: Formula


@dataclass(frozen=True, slots=True)
class Trigger(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class TriggerL(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class TriggerNext(Formula):
    """``cause ~> arg``: a transition of ``arg`` triggered by ``cause``."""

    cause: Formula
    arg: Formula


@dataclass(frozen=True, slots=True)
class NoTrigger(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class NoTriggerL(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class NoTriggerNext(Formula):
    cause: Formula
    arg: Formula


@dataclass(frozen=True, slots=True)
class Alw(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class BigOdot(Formula):
    """Propositions in ``chosen`` hold, the rest of ``universe`` do not."""

    chosen: frozenset
    universe: frozenset

    def __post_init__(self):
        object.__setattr__(self, "chosen", frozenset(self.chosen))
        object.__setattr__(self, "universe", frozenset(self.universe))
        if not self.chosen <= self.universe:
            raise ValueError("BigOdot: chosen set must be a subset of the universe")

    def children(self):
        return ()


@dataclass(frozen=True, slots=True)
class AtOrigin(Formula):
    """``at 0: arg`` -- constrains only the first instant."""

    arg: Formula


CORE_TYPES = (Prop, Const, Not, And, Or, Implies, Iff, Until, Since)
INTERVAL_TYPES = (Until, Since, Release, Redeem, Diamond, DiamondP, Box, BoxP)


# ---------------------------------------------------------------- helpers


def conj(*args: Formula) -> Formula:
    """Conjunction that flattens and drops ``TRUE``; empty gives ``TRUE``."""
    out: list[Formula] = []
    for a in args:
        if isinstance(a, And):
            out.extend(a.args)
        elif a == TRUE:
            continue
        else:
            out.append(a)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*args: Formula) -> Formula:
    out: list[Formula] = []
    for a in args:
        if isinstance(a, Or):
            out.extend(a.args)
        elif a == FALSE:
            continue
        else:
            out.append(a)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def becomes(x: Formula) -> Formula:
    return Becomes(Not(x), x)


def becomes_l(x: Formula) -> Formula:
    return BecomesNext(Not(x), x)


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal, each distinct object visited once."""
    seen: set[int] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(node.children()))


def is_core(phi: Formula) -> bool:
    return all(isinstance(n, CORE_TYPES) for n in walk(phi))


def atoms(phi: Formula) -> set[str]:
    out = set()
    for n in walk(phi):
        if isinstance(n, Prop):
            out.add(n.name)
        elif isinstance(n, BigOdot):
            out |= set(n.universe)
    return out


def intervals(phi: Formula) -> Iterator[Interval]:
    for n in walk(phi):
        if isinstance(n, INTERVAL_TYPES):
            yield n.interval


def map_children(node: Formula, fn) -> Formula:
    """Rebuild ``node`` with ``fn`` applied to each child."""
    if isinstance(node, (And, Or)):
        return type(node)(tuple(fn(a) for a in node.args))
    kwargs = {}
    changed = False
    for f in fields(node):
        v = getattr(node, f.name)
        if _is_child_field(node, f.name):
            nv = fn(v)
            changed |= nv is not v
            kwargs[f.name] = nv
        else:
            kwargs[f.name] = v
    return type(node)(**kwargs) if changed else node


__all__ = [
    "Formula", "Prop", "Const", "TRUE", "FALSE", "Not", "And", "Or", "Implies", "Iff",
    "Until", "Since", "Release", "Redeem", "Diamond", "DiamondP", "Box", "BoxP",
    "NowOnStrict", "UpToNowStrict", "NowOn", "UpToNow", "Becomes", "BecomesNext",
    "Trigger", "TriggerL", "TriggerNext", "NoTrigger", "NoTriggerL", "NoTriggerNext",
    "Alw", "BigOdot", "AtOrigin", "UNBOUNDED", "conj", "disj", "becomes", "becomes_l",
    "walk", "is_core", "atoms", "intervals", "map_children", "CORE_TYPES",
]
