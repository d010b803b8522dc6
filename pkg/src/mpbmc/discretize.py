"""Discrete-time under- and over-approximations of continuous-time MTL.

The translation is a rule table over the flat fragment: Boolean structure on
top, metric operators applied to propositional arguments only.  Each rule is
picked by the side (under/over) and by the polarity of the occurrence;
a negated occurrence of an under-approximation is approximated like a
positive occurrence of the over-approximation and vice versa.

Windows of universal operators (Box, BoxP) are handled by two transforms:

* ``interior``: the naturals strictly inside the window (weak);
* ``cover``: the closure of the window under ``UNDER``, the closure widened by
  one step on both sides under ``OVER`` (strong).

Existential operators (Diamond, DiamondP) use the dual assignment.
Anything outside the table raises ``UnsupportedPattern``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .mtl import formula as F
from .mtl.expand import Continuous, granularity_admissible, unfold
from .mtl.formula import FALSE, TRUE, Not
from .mtl.interval import Interval
from .tpn.axioms import AxiomVariant, generate_axioms
from .tpn.net import TimedPetriNet, check_nondegenerate, validate_structure


class ApproximationSide(enum.Enum):
    UNDER = "under"
    OVER = "over"


class UnsupportedPattern(ValueError):
    def __init__(self, node: F.Formula, why: str):
        super().__init__(f"{why}: {node}")
        self.node = node


_PROPOSITIONAL = (F.Prop, F.Const, F.Not, F.And, F.Or, F.Implies, F.Iff, F.BigOdot)
_UNFOLDED = (F.NowOn, F.UpToNow, F.Trigger, F.TriggerL, F.NoTrigger, F.NoTriggerL,
             F.TriggerNext, F.NoTriggerNext)


def is_propositional(phi: F.Formula) -> bool:
    return all(isinstance(n, _PROPOSITIONAL) for n in F.walk(phi))


def _ints(iv: Interval, delta: Fraction) -> Interval:
    s = iv.scale(1 / delta)
    for b in (s.lo, s.hi):
        if b is not None and b.denominator != 1:
            raise ValueError(f"bound {b * delta} is not a multiple of delta={delta}")
    return s


def _interior(iv: Interval):
    a, b = iv.discrete()
    return a, b


def _cover(iv: Interval, side: ApproximationSide):
    lo = math.floor(iv.lo)
    hi = None if iv.hi is None else math.ceil(iv.hi)
    if side is ApproximationSide.OVER:
        lo = max(0, lo - 1)
        hi = None if hi is None else hi + 1
    return lo, hi


def _window(rng) -> Interval | None:
    a, b = rng
    if b is not None and a > b:
        return None
    return Interval.closed(a, b)


class _Approx:
    def __init__(self, delta, side: ApproximationSide):
        self.delta = Fraction(delta)
        self.side = side
        self.dom = Continuous(self.delta)

    def strong(self, positive: bool) -> bool:
        return positive if self.side is ApproximationSide.OVER else not positive

    def go(self, n: F.Formula, positive: bool) -> F.Formula:
        if isinstance(n, (F.Prop, F.Const, F.BigOdot)):
            return n
        if isinstance(n, F.Not):
            return Not(self.go(n.arg, not positive))
        if isinstance(n, F.And):
            return F.And(tuple(self.go(a, positive) for a in n.args))
        if isinstance(n, F.Or):
            return F.Or(tuple(self.go(a, positive) for a in n.args))
        if isinstance(n, F.Implies):
            return F.Implies(self.go(n.left, not positive), self.go(n.right, positive))
        if isinstance(n, F.Iff):
            if is_propositional(n):
                return n
            raise UnsupportedPattern(n, "temporal operand under a biconditional")
        if isinstance(n, F.AtOrigin):
            return F.AtOrigin(self.go(n.arg, positive))
        if isinstance(n, _UNFOLDED):
            return self.go(unfold(n, self.dom), positive)
        if isinstance(n, (F.Box, F.BoxP, F.Diamond, F.DiamondP)):
            return self._metric(n, type(n), n.arg, positive)
        if isinstance(n, (F.Until, F.Since)) and n.left == TRUE:
            return self._metric(n, F.Diamond if isinstance(n, F.Until) else F.DiamondP, n.right, positive)
        if isinstance(n, (F.Release, F.Redeem)) and n.left == FALSE:
            return self._metric(n, F.Box if isinstance(n, F.Release) else F.BoxP, n.right, positive)
        if isinstance(n, (F.NowOnStrict, F.UpToNowStrict)):
            self._flat(n, n.arg)
            fut = isinstance(n, F.NowOnStrict)
            if self.strong(positive):
                op = F.Box if fut else F.BoxP
            else:
                op = F.Diamond if fut else F.DiamondP
            return op(Interval.closed(0, 1), n.arg)
        if isinstance(n, F.Becomes):
            return self._becomes(n, positive)
        if isinstance(n, F.BecomesNext):
            self._flat(n, n.before, n.after)
            return F.BecomesNext(n.before, n.after)
        raise UnsupportedPattern(n, "operator outside the approximation rule table")

    def _flat(self, n, *args):
        for a in args:
            if not is_propositional(a):
                raise UnsupportedPattern(n, "nested temporal operator")

    def _metric(self, n, op, arg, positive):
        self._flat(n, arg)
        iv = _ints(n.interval, self.delta)
        universal = op in (F.Box, F.BoxP)
        if universal == self.strong(positive):
            w = _window(_cover(iv, self.side))
        else:
            w = _window(_interior(iv))
        if w is None:
            return TRUE if universal else FALSE
        return op(w, arg)

    def _becomes(self, n: F.Becomes, positive: bool):
        self._flat(n, n.before, n.after)
        a, b = n.before, n.after
        if not (a == Not(b) or b == Not(a)):
            raise UnsupportedPattern(n, "Becomes with non-complementary operands")
        c01 = Interval.closed(0, 1)
        if self.side is ApproximationSide.UNDER:
            return F.And((F.BoxP(c01, a), b))
        if positive:
            return F.And((F.BoxP(c01, a), F.Box(c01, b)))
        return F.BecomesNext(a, b)


def approximate(phi: F.Formula, delta, side: ApproximationSide) -> F.Formula:
    delta = Fraction(delta)
    if not granularity_admissible(delta, phi):
        raise ValueError(f"delta={delta} does not divide every bound of the formula")
    return _Approx(delta, side).go(phi, True)


def under_approx(phi: F.Formula, delta) -> F.Formula:
    return approximate(phi, delta, ApproximationSide.UNDER)


def over_approx(phi: F.Formula, delta) -> F.Formula:
    return approximate(phi, delta, ApproximationSide.OVER)


# ---------------------------------------------------------------- verification formulas


Fragment = Union[F.Formula, TimedPetriNet]


@dataclass
class SystemModel:
    continuous_fragments: Sequence[tuple[str, Fragment]] = ()
    discrete_fragments: Sequence[tuple[str, F.Formula]] = ()
    delta: Fraction = Fraction(1)
    k: int = 1
    parameters: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.delta = Fraction(self.delta)
        self.continuous_fragments = list(self.continuous_fragments)
        self.discrete_fragments = list(self.discrete_fragments)

    def validate(self) -> None:
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.k < 1:
            raise ValueError("k must be positive")
        for name, frag in self.continuous_fragments:
            if isinstance(frag, TimedPetriNet):
                bad = validate_structure(frag) + check_nondegenerate(frag, self.delta)
                if bad:
                    raise ValueError(f"net {name}: " + ", ".join(map(str, bad)))
            elif not granularity_admissible(self.delta, frag):
                raise ValueError(f"fragment {name}: delta={self.delta} does not divide its bounds")

    def system(self, side: ApproximationSide) -> list[tuple[str, F.Formula]]:
        """Labeled discrete-time system formulas for one side."""
        self.validate()
        variant = AxiomVariant.DISCRETE_UNDER if side is ApproximationSide.UNDER else AxiomVariant.DISCRETE_OVER
        out = []
        for name, frag in self.continuous_fragments:
            if isinstance(frag, TimedPetriNet):
                out += [(f"{name}:{label}", f) for label, f in generate_axioms(frag, self.delta, variant)]
            else:
                out.append((name, approximate(frag, self.delta, side)))
        out += list(self.discrete_fragments)
        return out


def _build(m: SystemModel, prop: F.Formula, sys_side: ApproximationSide) -> F.Formula:
    prop_side = ApproximationSide.OVER if sys_side is ApproximationSide.UNDER else ApproximationSide.UNDER
    lhs = F.conj(*[f for _, f in m.system(sys_side)])
    return F.Implies(F.Alw(lhs), F.Alw(approximate(prop, m.delta, prop_side)))


def build_phi_plus(m: SystemModel, prop: F.Formula) -> F.Formula:
    """Alw(under-approximated system) => Alw(over-approximated property)."""
    return _build(m, prop, ApproximationSide.UNDER)


def build_phi_minus(m: SystemModel, prop: F.Formula) -> F.Formula:
    """Alw(over-approximated system) => Alw(under-approximated property)."""
    return _build(m, prop, ApproximationSide.OVER)
