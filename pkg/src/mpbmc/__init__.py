"""Bounded satisfiability checking for mixed discrete/continuous-time MTL and
timed Petri net models."""

__version__ = "0.1.0"
