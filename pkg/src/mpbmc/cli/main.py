"""Command-line driver."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from typing import Optional, Sequence

from ..bmc import KCounterexample
from .verify import EXIT_CODES, EXIT_ERROR, MODES, describe, render_report, run_verification

CASESTUDY = "casestudy"


def casestudy_path() -> str:
    """Path of the bundled monitoring-system model."""
    return str(resources.files("mpbmc.cli") / "assets" / "casestudy" / "monitoring.model")


def _param(text: str) -> tuple[str, str]:
    name, eq, value = text.partition("=")
    if not eq or not name.strip().isidentifier():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpbmc", description=(
        "Check a continuous-time property of a mixed discrete/continuous model by "
        "bounded satisfiability of its discrete under- and over-approximations."))
    ap.add_argument("--model", required=True,
                    help=f"model file, or '{CASESTUDY}' for the bundled monitoring system")
    ap.add_argument("--prop", required=True, help="property label in the model, or a formula file")
    ap.add_argument("--mode", choices=MODES, default="both")
    ap.add_argument("--delta", help="sampling period (overrides the model)")
    ap.add_argument("--bound", type=int, help="lasso bound k (overrides the model)")
    ap.add_argument("--param", type=_param, action="append", default=[], metavar="NAME=VALUE",
                    help="override a model parameter; repeatable")
    ap.add_argument("--solver", default="embedded",
                    help="embedded, pysat:<name> or exec:<cmd>")
    ap.add_argument("--emit-dimacs", metavar="DIR", help="write each CNF instance to DIR")
    ap.add_argument("--trace", metavar="PATH", help="write counterexample traces to PATH")
    ap.add_argument("--timeout", type=float, help="solver timeout in seconds")
    ap.add_argument("--report", choices=("text", "records"), default="text")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    model = casestudy_path() if args.model == CASESTUDY else args.model
    try:
        run = run_verification(model, args.prop, args.mode, args.delta, args.bound, args.solver,
                               args.timeout, args.emit_dimacs, dict(args.param))
    except Exception as e:  # every failure maps to the error exit code
        print(f"mpbmc: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(render_report(run.rows, args.report))
    for r in run.rows:
        for d in r.diagnostics:
            print(f"note ({r.label} {r.side}): {d}", file=sys.stderr)
    if args.report == "text":
        print(describe(run.outcome))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for side, name in (("phi_plus", "phi+"), ("phi_minus", "phi-")):
                v = getattr(run.outcome, side, None)
                if isinstance(v, KCounterexample):
                    fh.write(f"# counterexample to {name}\n{v.trace.pretty()}\n")
    return EXIT_CODES[type(run.outcome)]


if __name__ == "__main__":
    sys.exit(main())
