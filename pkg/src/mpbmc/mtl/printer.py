"""Canonical prefix-notation printer (inverse of :mod:`mpbmc.mtl.parser`)."""

from __future__ import annotations

from . import formula as F

_UNARY = {
    F.Not: "not",
    F.NowOnStrict: "now-on-strict",
    F.UpToNowStrict: "up-to-now-strict",
    F.NowOn: "now-on",
    F.UpToNow: "up-to-now",
    F.Trigger: "trigger",
    F.TriggerL: "trigger-l",
    F.NoTrigger: "no-trigger",
    F.NoTriggerL: "no-trigger-l",
    F.Alw: "alw",
    F.AtOrigin: "at-origin",
}
_BINARY = {
    F.Implies: "implies",
    F.Iff: "iff",
    F.Becomes: "becomes",
    F.BecomesNext: "becomes-next",
    F.TriggerNext: "trigger-next",
    F.NoTriggerNext: "no-trigger-next",
}
_METRIC_BINARY = {F.Until: "until", F.Since: "since", F.Release: "release", F.Redeem: "redeem"}
_METRIC_UNARY = {F.Diamond: "diamond", F.DiamondP: "diamond-p", F.Box: "box", F.BoxP: "box-p"}


def pretty(phi: F.Formula) -> str:
    t = type(phi)
    if t is F.Prop:
        return phi.name
    if t is F.Const:
        return "true" if phi.value else "false"
    if t in _UNARY:
        return f"({_UNARY[t]} {pretty(phi.arg)})"
    if t in (F.And, F.Or):
        head = "and" if t is F.And else "or"
        return "(" + " ".join([head] + [pretty(a) for a in phi.args]) + ")"
    if t in _BINARY:
        a, b = phi.children()
        return f"({_BINARY[t]} {pretty(a)} {pretty(b)})"
    if t in _METRIC_BINARY:
        return f"({_METRIC_BINARY[t]} {phi.interval} {pretty(phi.left)} {pretty(phi.right)})"
    if t in _METRIC_UNARY:
        return f"({_METRIC_UNARY[t]} {phi.interval} {pretty(phi.arg)})"
    if t is F.BigOdot:
        chosen = " ".join(sorted(phi.chosen))
        universe = " ".join(sorted(phi.universe))
        return f"(odot ({chosen}) ({universe}))"
    raise TypeError(f"cannot print {t.__name__}")


KEYWORDS = {
    **{v: k for k, v in _UNARY.items()},
    **{v: k for k, v in _BINARY.items()},
    **{v: k for k, v in _METRIC_BINARY.items()},
    **{v: k for k, v in _METRIC_UNARY.items()},
    "and": F.And,
    "or": F.Or,
    "odot": F.BigOdot,
}
