"""Reader for the prefix (s-expression) formula syntax.

    (until [0,2] p q)        (diamond (0,5] q)       (box-p =1 (not x))
    (alw (implies p (diamond (0,$T/2] q)))

Interval bounds are rationals (``3``, ``1.5``, ``3/2``), ``inf``, or
arithmetic over ``$name`` parameters (``$T/2``, ``3*$T/2``, ``$T+$delta``).
Shorthands ``=d``, ``<d`` and ``>=d`` denote ``[d,d]``, ``(0,d)`` and
``[d,inf)``.  ``;`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from . import formula as F
from .interval import Interval, IntervalError
from .printer import KEYWORDS


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


@dataclass
class _Tok:
    kind: str  # '(' ')' 'ident' 'ivl'
    text: str
    line: int
    col: int
    value: object = None


_BOUND = r"[0-9$.][^,\s()\[\]]*"
_IVL_RE = re.compile(rf"([\[(])\s*({_BOUND})\s*,\s*(inf|{_BOUND})\s*([\])])")
_SHORT_RE = re.compile(r"(>=|=|<)([^\s()]+)")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_EXPR_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?(?:/\d+)?)|\$([A-Za-z_][A-Za-z0-9_]*)|([-+*/]))")


def eval_bound(text: str, params: Optional[Mapping[str, Fraction]] = None) -> Fraction:
    """Evaluate ``3*$T/2``-style bound expressions exactly."""
    params = params or {}
    toks: list[tuple[str, object]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _EXPR_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad bound expression {text!r}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("n", Fraction(num)))
        elif name is not None:
            if name not in params:
                raise ValueError(f"unknown parameter ${name}")
            toks.append(("n", Fraction(params[name])))
        else:
            toks.append(("o", op))
        pos = m.end()

    def term(i):
        if i >= len(toks) or toks[i][0] != "n":
            raise ValueError(f"bad bound expression {text!r}")
        val = toks[i][1]
        i += 1
        while i < len(toks) and toks[i][1] in ("*", "/"):
            op = toks[i][1]
            if i + 1 >= len(toks) or toks[i + 1][0] != "n":
                raise ValueError(f"bad bound expression {text!r}")
            val = val * toks[i + 1][1] if op == "*" else val / toks[i + 1][1]
            i += 2
        return val, i

    val, i = term(0)
    while i < len(toks):
        op = toks[i][1]
        if op not in ("+", "-"):
            raise ValueError(f"bad bound expression {text!r}")
        rhs, i = term(i + 1)
        val = val + rhs if op == "+" else val - rhs
    return val


def _tokenize(text: str, params) -> list[_Tok]:
    toks: list[_Tok] = []
    i, line, col0 = 0, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        col = i - col0 + 1
        if c == "\n":
            line += 1
            col0 = i + 1
            i += 1
            continue
        if c.isspace():
            i += 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in "([":
            m = _IVL_RE.match(text, i)
            if m:
                toks.append(_Tok("ivl", m.group(0), line, col, _interval(m, params, line, col)))
                i = m.end()
                continue
            if c == "[":
                raise FormulaSyntaxError("malformed interval", line, col)
            toks.append(_Tok("(", c, line, col))
            i += 1
            continue
        if c == ")":
            toks.append(_Tok(")", c, line, col))
            i += 1
            continue
        m = _SHORT_RE.match(text, i)
        if m:
            try:
                d = eval_bound(m.group(2), params)
                kind = m.group(1)
                if kind == "=":
                    iv = Interval.point(d)
                elif kind == "<":
                    iv = Interval.below(d)
                else:
                    iv = Interval.at_least(d)
            except (ValueError, IntervalError, ZeroDivisionError) as e:
                raise FormulaSyntaxError(f"malformed interval: {e}", line, col) from None
            toks.append(_Tok("ivl", m.group(0), line, col, iv))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            toks.append(_Tok("ident", m.group(0), line, col))
            i = m.end()
            continue
        raise FormulaSyntaxError(f"unexpected character {c!r}", line, col)
    return toks


def _interval(m, params, line, col) -> Interval:
    lb, lo, hi, rb = m.groups()
    try:
        lo_v = eval_bound(lo, params)
        hi_v = None if hi == "inf" else eval_bound(hi, params)
        if hi_v is None and rb == "]":
            raise IntervalError("infinite bound must be open")
        return Interval(lo_v, hi_v, lb == "(", rb == ")")
    except (ValueError, IntervalError, ZeroDivisionError) as e:
        raise FormulaSyntaxError(f"malformed interval {m.group(0)}: {e}", line, col) from None


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            raise FormulaSyntaxError("unexpected end of input", last.line, last.col)
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def formula(self) -> F.Formula:
        tok = self.next()
        if tok.kind == "ident":
            if tok.text == "true":
                return F.TRUE
            if tok.text == "false":
                return F.FALSE
            if tok.text in KEYWORDS:
                raise FormulaSyntaxError(f"operator {tok.text!r} used as a proposition", tok.line, tok.col)
            return F.Prop(tok.text)
        if tok.kind != "(":
            raise FormulaSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.col)
        head = self.expect("ident")
        op = KEYWORDS.get(head.text)
        if op is None:
            raise FormulaSyntaxError(f"unknown operator {head.text!r}", head.line, head.col)
        if op is F.BigOdot:
            chosen = self.name_list()
            universe = self.name_list()
            self.expect(")")
            try:
                return F.BigOdot(frozenset(chosen), frozenset(universe))
            except ValueError as e:
                raise FormulaSyntaxError(str(e), head.line, head.col) from None
        interval = None
        if op in (F.Until, F.Since, F.Release, F.Redeem, F.Diamond, F.DiamondP, F.Box, F.BoxP):
            itok = self.next()
            if itok.kind != "ivl":
                raise FormulaSyntaxError(f"malformed interval {itok.text!r}", itok.line, itok.col)
            interval = itok.value
        args = []
        while self.peek() is not None and self.peek().kind != ")":
            args.append(self.formula())
        self.expect(")")
        return self.build(op, interval, args, head)

    def name_list(self) -> list[str]:
        self.expect("(")
        names = []
        while self.peek() is not None and self.peek().kind == "ident":
            names.append(self.next().text)
        self.expect(")")
        return names

    def build(self, op, interval, args, head) -> F.Formula:
        n = len(args)

        def arity(*allowed):
            if n not in allowed:
                raise FormulaSyntaxError(
                    f"{head.text} expects {' or '.join(map(str, allowed))} arguments, got {n}",
                    head.line, head.col,
                )

        if op in (F.And, F.Or):
            return op(tuple(args))
        if interval is not None:
            if op in (F.Until, F.Since, F.Release, F.Redeem):
                arity(2)
                return op(interval, args[0], args[1])
            arity(1)
            return op(interval, args[0])
        if op in (F.Becomes, F.BecomesNext):
            arity(1, 2)
            if n == 1:
                return op(F.Not(args[0]), args[0])
            return op(args[0], args[1])
        if op in (F.Implies, F.Iff, F.TriggerNext, F.NoTriggerNext):
            arity(2)
            return op(args[0], args[1])
        arity(1)
        return op(args[0])


def parse_formula(text: str, params: Optional[Mapping[str, Fraction]] = None) -> F.Formula:
    toks = _tokenize(text, params)
    if not toks:
        raise FormulaSyntaxError("empty formula", 1, 1)
    p = _Parser(toks)
    phi = p.formula()
    extra = p.peek()
    if extra is not None:
        raise FormulaSyntaxError(f"trailing input {extra.text!r}", extra.line, extra.col)
    return phi


def parse_formulas(text: str, params: Optional[Mapping[str, Fraction]] = None) -> list[F.Formula]:
    """Parse a sequence of top-level formulas."""
    toks = _tokenize(text, params)
    p = _Parser(toks)
    out = []
    while p.peek() is not None:
        out.append(p.formula())
    return out
