"""End-user driver: model files, the verdict procedure, reports."""

from .model import (
    KINDS, Block, FragmentError, ModelFile, ModelSyntaxError, build_system, load_model,
    parse_model, property_formula, resolve_params,
)
from .verify import (
    EXIT_CODES, EXIT_ERROR, Disproved, Inconclusive, InconsistentVerdicts, Outcome, Proved,
    ReportRow, Run, TimedOut, decide, describe, render_report, run_verification, verify,
)
from .main import build_parser, casestudy_path, main

__all__ = [
    "KINDS", "Block", "FragmentError", "ModelFile", "ModelSyntaxError", "build_system", "load_model",
    "parse_model", "property_formula", "resolve_params", "EXIT_CODES", "EXIT_ERROR", "Disproved",
    "Inconclusive", "InconsistentVerdicts", "Outcome", "Proved", "ReportRow", "Run", "TimedOut",
    "decide", "describe", "render_report", "run_verification", "verify", "build_parser",
    "casestudy_path", "main",
]
