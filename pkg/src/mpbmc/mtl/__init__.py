"""Metric temporal logic: syntax, derived operators, discrete-time semantics."""

from .formula import *  # noqa: F401,F403
from .formula import __all__ as _formula_all
from .interval import Interval, IntervalError, ival, UNBOUNDED
from .parser import FormulaSyntaxError, parse_formula, parse_formulas, eval_bound
from .printer import pretty
from .expand import (
    DISCRETE, Continuous, Discrete, TimeDomain, UnsupportedInDomain,
    expand_derived, granularity_admissible, metric_bounds, unfold,
)
from .semantics import Trace, eval_at, holds_globally, first_violation, valuation_horizon, stabilization

__all__ = list(_formula_all) + [
    "Interval", "IntervalError", "ival", "FormulaSyntaxError", "parse_formula", "parse_formulas",
    "eval_bound", "pretty", "DISCRETE", "Continuous", "Discrete", "TimeDomain",
    "UnsupportedInDomain", "expand_derived", "granularity_admissible", "metric_bounds", "unfold",
    "Trace", "eval_at", "holds_globally", "first_violation", "valuation_horizon", "stabilization",
]
