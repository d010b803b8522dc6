"""Metric intervals over the nonnegative rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Number = Union[int, Fraction, str]


class IntervalError(ValueError):
    pass


def _rat(x: Number) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point bounds are not accepted; use Fraction or str")
    return Fraction(x)


@dataclass(frozen=True)
class Interval:
    """Interval ``<lo, hi>`` with ``hi=None`` standing for +infinity."""

    lo: Fraction
    hi: Optional[Fraction]
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", _rat(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", _rat(self.hi))
        else:
            object.__setattr__(self, "hi_open", True)
        if self.lo < 0:
            raise IntervalError(f"negative lower bound {self.lo}")
        if self.hi is not None:
            if self.lo > self.hi:
                raise IntervalError(f"lower bound {self.lo} exceeds upper bound {self.hi}")
            if self.lo == self.hi and (self.lo_open or self.hi_open):
                raise IntervalError(f"degenerate open interval at {self.lo}")

    # common shorthands
    @classmethod
    def closed(cls, lo: Number, hi: Optional[Number]) -> "Interval":
        return cls(_rat(lo), None if hi is None else _rat(hi), False, hi is None)

    @classmethod
    def point(cls, d: Number) -> "Interval":
        """``=d``"""
        return cls(_rat(d), _rat(d))

    @classmethod
    def below(cls, d: Number) -> "Interval":
        """``<d``, i.e. ``(0, d)``"""
        return cls(Fraction(0), _rat(d), True, True)

    @classmethod
    def at_least(cls, d: Number) -> "Interval":
        """``>=d``, i.e. ``[d, inf)``"""
        return cls(_rat(d), None, False, True)

    @classmethod
    def unbounded(cls) -> "Interval":
        """``(0, inf)``, the default interval of unsubscripted operators."""
        return cls(Fraction(0), None, True, True)

    @property
    def is_infinite(self) -> bool:
        return self.hi is None

    def bounds(self) -> set[Fraction]:
        """Finite, non-null endpoints."""
        return {b for b in (self.lo, self.hi) if b is not None and b != 0}

    def scale(self, factor: Fraction) -> "Interval":
        return Interval(
            self.lo * factor,
            None if self.hi is None else self.hi * factor,
            self.lo_open,
            self.hi_open,
        )

    def discrete(self) -> tuple[int, Optional[int]]:
        """Integer range ``[a, b]`` of the naturals contained in the interval.

        ``b`` is None for unbounded intervals; ``a > b`` signals emptiness.
        """
        a = math.floor(self.lo) + 1 if self.lo_open else math.ceil(self.lo)
        if self.hi is None:
            return a, None
        b = math.ceil(self.hi) - 1 if self.hi_open else math.floor(self.hi)
        return a, b

    def __str__(self) -> str:
        if self.hi is not None and self.lo == self.hi:
            return f"={_fmt(self.lo)}"
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        hi = "inf" if self.hi is None else _fmt(self.hi)
        return f"{left}{_fmt(self.lo)},{hi}{right}"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def ival(lo: Number, hi: Optional[Number], lo_open: bool = False, hi_open: bool = False) -> Interval:
    return Interval(_rat(lo), None if hi is None else _rat(hi), lo_open, hi is None or hi_open)


UNBOUNDED = Interval.unbounded()
