"""MTL axiomatizations of 1-safe timed Petri nets.

Five axiom families are produced.  ``GENERIC``, ``FOR_UNDER`` and ``FOR_OVER``
are continuous-time formulas (the last two rewritten so that they discretize
well); ``DISCRETE_UNDER`` and ``DISCRETE_OVER`` are the already discretized
forms, with every metric bound divided by delta.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from ..mtl import formula as F
from ..mtl.formula import FALSE, Not, Prop
from ..mtl.interval import UNBOUNDED, Interval
from .net import TimedPetriNet, check_nondegenerate, eps, mu, tau, validate_structure


class AxiomVariant(enum.Enum):
    GENERIC = "generic"
    FOR_UNDER = "for-under"
    FOR_OVER = "for-over"
    DISCRETE_UNDER = "discrete-under"
    DISCRETE_OVER = "discrete-over"

    @property
    def discrete(self) -> bool:
        return self in (AxiomVariant.DISCRETE_UNDER, AxiomVariant.DISCRETE_OVER)

    @property
    def over(self) -> bool:
        return self in (AxiomVariant.FOR_OVER, AxiomVariant.DISCRETE_OVER)


class NetPreconditionError(ValueError):
    pass


def _neg(x):
    return x.arg if isinstance(x, Not) else Not(x)


def _becomes(x):
    return F.Becomes(_neg(x), x)


def _becomes_l(x):
    return F.BecomesNext(_neg(x), x)


def _M(p):
    return Prop(mu(p))


def _E(p):
    return Prop(eps(p))


def _T(u):
    return Prop(tau(u))


conj, disj = F.conj, F.disj


def _imp(a, b):
    return F.Implies(a, b)


def _oc(lo, hi):
    return Interval(Fraction(lo), Fraction(hi), True, True)


def _closed(lo, hi):
    return Interval.closed(lo, hi)


class _Ops:
    """Transition operators of one family.

    ``trig(cause, x)`` / ``notrig(cause, x)`` build the (non-)transition of
    ``x`` used in consequents; ``cause`` only matters for the over-approximation
    families, whose consequents are caused transitions.
    """

    def __init__(self, v: AxiomVariant):
        self.v = v
        if v is AxiomVariant.GENERIC:
            self.becomes = _becomes
            self.trig = lambda c, x: F.Trigger(x)
            self.notrig = lambda c, x: F.NoTrigger(x)
        elif v in (AxiomVariant.FOR_UNDER, AxiomVariant.DISCRETE_UNDER):
            self.becomes = _becomes_l
            self.trig = lambda c, x: F.TriggerL(x)
            self.notrig = lambda c, x: F.NoTriggerL(x)
        elif v is AxiomVariant.FOR_OVER:
            self.becomes = _becomes
            self.trig = F.TriggerNext
            self.notrig = F.NoTriggerNext
        else:
            self.becomes = _becomes_l
            self.trig = F.TriggerNext
            self.notrig = F.NoTriggerNext


def _exclusive(ops: _Ops, cause, chosen_from, others) -> F.Formula:
    """Exactly one of ``chosen_from`` fires and none of ``others``."""
    if not chosen_from:
        return FALSE
    alts = []
    for u in chosen_from:
        alts.append(conj(ops.trig(cause, _T(u)), *[ops.notrig(cause, _T(w)) for w in chosen_from if w != u]))
    return conj(disj(*alts), *[ops.notrig(cause, _T(w)) for w in others])


def generate_axioms(net: TimedPetriNet, delta, variant: AxiomVariant) -> list[tuple[str, F.Formula]]:
    delta = Fraction(delta)
    bad = validate_structure(net)
    if bad:
        raise NetPreconditionError("net is malformed: " + ", ".join(map(str, bad)))
    if variant.discrete:
        bad = check_nondegenerate(net, delta)
        if bad:
            raise NetPreconditionError("net is degenerate for delta=%s: %s" % (delta, ", ".join(map(str, bad))))
    ops = _Ops(variant)
    out: list[tuple[str, F.Formula]] = []
    for p in net.places:
        out.append((f"Marking({p})", _marking(net, p, delta, ops)))
        out.append((f"Unmarking({p})", _unmarking(net, p, ops)))
    for u in net.transitions:
        out.append((f"Enabling({u})", _enabling(net, u, delta, variant)))
        if net.beta[u] is not None:
            bp, bn = _bound(net, u, delta, variant)
            out.append((f"BoundP({u})", bp))
            out.append((f"BoundN({u})", bn))
        out.append((f"Effect({u})", _effect(net, u, delta, ops)))
    for p in net.places:
        out.append((f"ZeroUnmark({p})", _zero_unmark(net, p, ops)))
    out.append(("Init", _init(net, delta, variant)))
    return out


def axioms_conjunction(net: TimedPetriNet, delta, variant: AxiomVariant) -> F.Formula:
    return conj(*[f for _, f in generate_axioms(net, delta, variant)])


# ---------------------------------------------------------------- places


def _marking(net, p, delta, ops: _Ops):
    M = _M(p)
    body = _exclusive(ops, M, net.pre(p), net.post(p))
    if p in net.initial:
        v = ops.v
        if v is AxiomVariant.GENERIC:
            never = F.BoxP(UNBOUNDED, Not(M))
        elif v in (AxiomVariant.FOR_UNDER, AxiomVariant.DISCRETE_UNDER):
            never = F.BoxP(Interval.at_least(0), Not(M))
        elif v is AxiomVariant.FOR_OVER:
            never = F.BoxP(Interval.at_least(delta), Not(M))
        else:
            never = F.BoxP(Interval.at_least(1), Not(M))
        body = disj(body, never)
    return _imp(ops.becomes(M), body)


def _unmarking(net, p, ops: _Ops):
    M = _M(p)
    return _imp(ops.becomes(Not(M)), _exclusive(ops, Not(M), net.post(p), net.pre(p)))


# ---------------------------------------------------------------- transitions


def _ratio(x: Fraction, delta: Fraction) -> int:
    r = x / delta
    if r.denominator != 1:
        raise NetPreconditionError(f"bound {x} is not a multiple of delta={delta}")
    return int(r)


def _enabling(net, u, delta, v: AxiomVariant):
    a = net.alpha[u]
    parts = []
    for p in net.pre(u):
        M, E = _M(p), _E(p)
        on, off = F.And((M, E)), F.And((M, Not(E)))
        if v is AxiomVariant.GENERIC:
            w = _oc(0, a)
            parts.append(disj(conj(F.UpToNowStrict(on), F.BoxP(w, on)), conj(F.UpToNowStrict(off), F.BoxP(w, off))))
        elif v is AxiomVariant.FOR_UNDER:
            w = _oc(0, a - delta)
            parts.append(disj(conj(M, E, F.BoxP(w, on)), conj(M, Not(E), F.BoxP(w, off))))
        elif v is AxiomVariant.DISCRETE_UNDER:
            w = _closed(1, _ratio(a, delta) - 2)
            parts.append(disj(conj(M, E, F.BoxP(w, on)), conj(M, Not(E), F.BoxP(w, off))))
        elif v is AxiomVariant.FOR_OVER:
            w = Interval(delta, a, False, True)
            parts.append(disj(conj(F.UpToNowStrict(on), F.BoxP(w, on)), conj(F.UpToNowStrict(off), F.BoxP(w, off))))
        else:
            w = _closed(0, _ratio(a, delta) + 1)
            parts.append(disj(F.BoxP(w, on), F.BoxP(w, off)))
    # over discrete time the antecedent transition is the two-instant TriggerL
    lhs = F.TriggerL(_T(u)) if v in (AxiomVariant.FOR_UNDER,) or v.discrete else F.Trigger(_T(u))
    return _imp(lhs, conj(*parts))


def _bound(net, u, delta, v: AxiomVariant):
    b = net.beta[u]
    pre = net.pre(u)
    tu = _T(u)
    marked = [_M(p) for p in pre]
    res = []
    for firing in (True, False):
        cur = tu if firing else Not(tu)
        flip = Not(tu) if firing else tu
        if not v.discrete:
            w = _oc(0, b)
            nos = F.NowOnStrict
            unmark = disj(*[F.Or((Not(_M(p)), nos(Not(_M(p))))) for p in pre])
            zero = disj(*[F.And((
                _imp(F.BoxP(w, _E(p)), F.Or((Not(_E(p)), nos(Not(_E(p)))))),
                _imp(F.BoxP(w, Not(_E(p))), F.Or((_E(p), nos(_E(p))))),
            )) for p in pre])
            res.append(_imp(F.BoxP(w, conj(cur, *marked)), disj(unmark, zero, flip, nos(flip))))
        elif v is AxiomVariant.DISCRETE_UNDER:
            w = _closed(0, _ratio(b, delta))
            one = Interval.point(1)
            unmark = disj(*[F.Diamond(one, Not(_M(p))) for p in pre])
            zero = disj(*[F.And((
                _imp(F.BoxP(w, _E(p)), F.Diamond(one, Not(_E(p)))),
                _imp(F.BoxP(w, Not(_E(p))), F.Diamond(one, _E(p))),
            )) for p in pre])
            res.append(_imp(F.BoxP(w, conj(cur, *marked)), disj(unmark, zero, F.Diamond(one, flip))))
        else:
            bd = _ratio(b, delta)
            w1 = _closed(1, bd - 1)
            w0 = _closed(0, bd - 1)
            c01 = _closed(0, 1)
            if firing:
                unmark = disj(*[F.Or((Not(_M(p)), F.Box(c01, Not(_M(p))))) for p in pre])
            else:
                unmark = disj(*[F.Box(c01, Not(_M(p))) for p in pre])
            zero = disj(*[F.And((
                _imp(F.BoxP(w1, _E(p)), F.Or((Not(_E(p)), F.Box(c01, Not(_E(p)))))),
                _imp(F.BoxP(w0, Not(_E(p))), F.Or((_E(p), F.Diamond(c01, _E(p))))),
            )) for p in pre])
            res.append(_imp(F.BoxP(w1, conj(cur, *marked)), disj(unmark, zero, flip)))
    return res[0], res[1]


def _effect(net, u, delta, ops: _Ops):
    v = ops.v
    tu = _T(u)
    if not v.over:
        parts = [disj(ops.becomes(Not(_M(p))), ops.trig(None, _E(p))) for p in net.pre(u)]
        parts += [disj(ops.becomes(_M(p)), ops.trig(None, _E(p))) for p in net.post(u)]
        lhs = F.Trigger(tu) if v is AxiomVariant.GENERIC else F.TriggerL(tu)
        return _imp(lhs, conj(*parts))
    halves = []
    for cause in (tu, Not(tu)):
        parts = []
        for p, target in [(p, Not(_M(p))) for p in net.pre(u)] + [(p, _M(p)) for p in net.post(u)]:
            before = _neg(target)
            if v is AxiomVariant.FOR_OVER:
                moved = F.And((F.UpToNowStrict(before), F.Box(Interval.point(delta), _imp(cause, target))))
            else:
                moved = F.And((F.BoxP(_closed(0, 1), before), F.Box(_closed(0, 2), _imp(cause, target))))
            parts.append(disj(moved, F.TriggerNext(cause, _E(p))))
        halves.append(_imp(ops.becomes(cause), conj(*parts)))
    return conj(*halves)


# ---------------------------------------------------------------- zero-time unmarking


def _zero_unmark_body(net, p, ops: _Ops, cause):
    pre, post = net.pre(p), net.post(p)
    alts = []
    for ua in pre:
        for ub in post:
            alts.append(conj(
                ops.trig(cause, _T(ua)), *[ops.notrig(cause, _T(w)) for w in pre if w != ua],
                ops.trig(cause, _T(ub)), *[ops.notrig(cause, _T(w)) for w in post if w != ub],
            ))
    return disj(*alts)


def _zero_unmark(net, p, ops: _Ops):
    E = _E(p)
    v = ops.v
    if not v.over:
        lhs = F.Trigger(E) if v is AxiomVariant.GENERIC else F.TriggerL(E)
        return _imp(lhs, _zero_unmark_body(net, p, ops, E))
    return conj(*[_imp(ops.becomes(c), _zero_unmark_body(net, p, ops, c)) for c in (E, Not(E))])


# ---------------------------------------------------------------- initialization


def _init(net, delta, v: AxiomVariant):
    unmarked = [Not(_M(p)) for p in net.places]
    m0 = conj(*[_M(p) for p in sorted(net.initial)])
    toggles = conj(*[_E(p) for p in net.places], *[_T(u) for u in net.transitions])
    if v is AxiomVariant.DISCRETE_UNDER:
        return F.AtOrigin(conj(*unmarked, F.Diamond(_closed(1, 2), m0), toggles))
    if v is AxiomVariant.DISCRETE_OVER:
        return F.AtOrigin(conj(*unmarked, F.Diamond(Interval.point(1), m0), F.Box(_closed(0, 1), toggles)))
    body = conj(*unmarked, F.Diamond(_closed(0, 2 * delta), m0), F.NowOn(toggles))
    if v is AxiomVariant.GENERIC:
        return F.AtOrigin(body)
    guard = Interval.at_least(delta) if v is AxiomVariant.FOR_UNDER else UNBOUNDED
    return _imp(F.BoxP(guard, FALSE), body)
