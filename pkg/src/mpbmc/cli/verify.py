"""The phi+/phi- verdict procedure and per-side timing reports."""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from ..bmc import KCounterexample, KUnknown, KValid, Verdict, check_valid
from ..discretize import SystemModel, build_phi_minus, build_phi_plus
from ..mtl import formula as F
from ..mtl.expand import DISCRETE, expand_derived
from ..mtl.semantics import Trace
from ..sat.cnf import write_dimacs
from ..tpn.net import net_atoms
from .model import build_system, load_model, net_fragments, property_formula

MODES = ("plus", "minus", "both")


# ---------------------------------------------------------------- outcomes


@dataclass(frozen=True)
class Proved:
    phi_plus: Verdict
    phi_minus: Optional[Verdict] = None


@dataclass(frozen=True)
class Disproved:
    witness: Trace
    phi_plus: Optional[Verdict] = None
    phi_minus: Optional[Verdict] = None


@dataclass(frozen=True)
class Inconclusive:
    phi_plus: Optional[Verdict]
    phi_minus: Optional[Verdict]


@dataclass(frozen=True)
class TimedOut:
    phi_plus: Optional[Verdict]
    phi_minus: Optional[Verdict]


Outcome = Union[Proved, Disproved, Inconclusive, TimedOut]

EXIT_CODES = {Proved: 0, Disproved: 1, Inconclusive: 2, TimedOut: 4}
EXIT_ERROR = 3


class InconsistentVerdicts(AssertionError):
    """phi+ valid together with a phi- counterexample: the approximations are unsound."""


def decide(phi_plus: Optional[Verdict], phi_minus: Optional[Verdict]) -> Outcome:
    """Proved iff phi+ is valid; Disproved iff phi- has a counterexample."""
    proved = isinstance(phi_plus, KValid)
    refuted = isinstance(phi_minus, KCounterexample)
    if proved and refuted:
        raise InconsistentVerdicts("phi+ is valid but phi- has a counterexample")
    if proved:
        return Proved(phi_plus, phi_minus)
    if refuted:
        return Disproved(phi_minus.trace, phi_plus, phi_minus)
    if isinstance(phi_plus, KUnknown) or isinstance(phi_minus, KUnknown):
        return TimedOut(phi_plus, phi_minus)
    return Inconclusive(phi_plus, phi_minus)


# ---------------------------------------------------------------- report rows


@dataclass
class ReportRow:
    label: str
    side: str  # "phi+" or "phi-"
    params: dict[str, str]
    k: int
    build_time: float
    cnf_time: float
    solve_time: float
    verdict: str  # "T" valid, "F" not valid, "TO" timeout
    clauses: int
    vars: int = 0
    diagnostics: list[str] = field(default_factory=list)

    @property
    def symbol(self) -> str:
        return {"T": "⊤", "F": "⊥"}.get(self.verdict, self.verdict)


def _verdict_code(v: Verdict) -> str:
    if isinstance(v, KValid):
        return "T"
    if isinstance(v, KCounterexample):
        return "F"
    return "TO"


def _fmt_param(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- pipeline


@dataclass
class Run:
    outcome: Outcome
    rows: list[ReportRow]
    formulas: dict[str, F.Formula] = field(default_factory=dict)


def verify(model: SystemModel, prop: F.Formula, label: str = "prop", mode: str = "both",
           solver: str = "embedded", timeout: Optional[float] = None, emit_dimacs: Optional[str] = None,
           seed: int = 0) -> Run:
    """Build, expand, encode and solve phi+ and/or phi- for one property."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    atoms = [a for net in net_fragments(model) for a in net_atoms(net)]
    shown = {n: _fmt_param(v) for n, v in model.parameters.items() if n != "delta"}
    verdicts: dict[str, Optional[Verdict]] = {"plus": None, "minus": None}
    rows, formulas = [], {}
    for side, build in (("plus", build_phi_plus), ("minus", build_phi_minus)):
        if mode not in (side, "both"):
            continue
        t0 = time.perf_counter()
        phi = expand_derived(build(model, prop), DISCRETE, keep_alw=True)
        prep = time.perf_counter() - t0
        formulas[side] = phi
        v = check_valid(phi, model.k, atoms, solver=solver, timeout=timeout, seed=seed,
                        keep_cnf=emit_dimacs is not None)
        st = v.stats
        if emit_dimacs is not None:
            os.makedirs(emit_dimacs, exist_ok=True)
            write_dimacs(st.pop("cnf"), os.path.join(emit_dimacs, f"{label}_{side}.cnf"))
        verdicts[side] = v
        rows.append(ReportRow(label, "phi+" if side == "plus" else "phi-", shown, model.k,
                              prep + st.get("build_time", 0.0), st.get("cnf_time", 0.0),
                              st.get("solve_time", 0.0), _verdict_code(v), st.get("clauses", 0),
                              st.get("vars", 0), list(st.get("diagnostics", []))))
    return Run(decide(verdicts["plus"], verdicts["minus"]), rows, formulas)


def run_verification(model_path: str, property_label: str, mode: str = "both", delta=None,
                     k: Optional[int] = None, solver: str = "embedded", timeout: Optional[float] = None,
                     emit_dimacs: Optional[str] = None,
                     overrides: Optional[Mapping[str, str]] = None) -> Run:
    mf = load_model(model_path)
    model = build_system(mf, delta, k, overrides)
    prop = property_formula(mf, property_label, model.parameters)
    return verify(model, prop, property_label, mode, solver, timeout, emit_dimacs)


# ---------------------------------------------------------------- rendering


def render_report(rows: Sequence[ReportRow], fmt: str = "text") -> str:
    """Fixed-width table (``text``) or one JSON object per line (``records``)."""
    if fmt == "records":
        return "".join(json.dumps(asdict(r), ensure_ascii=False) + "\n" for r in rows)
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    names: list[str] = []
    for r in rows:
        names += [n for n in r.params if n not in names]
    head = ["Pr"] + names + ["k", "build(s)", "CNF(s)", "solve(s)", "Res", "#Cl(M)"]
    body = []
    for r in rows:
        side = "φ+" if r.side == "phi+" else "φ−"
        body.append([f"{r.label}: {side}"] + [r.params.get(n, "") for n in names]
                    + [str(r.k), f"{r.build_time:.3f}", f"{r.cnf_time:.3f}", f"{r.solve_time:.3f}",
                       r.symbol, f"{r.clauses / 1e6:.4f}"])
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in [head] + body]
    return "\n".join(lines) + "\n"


def describe(outcome: Outcome) -> str:
    name = type(outcome).__name__
    if isinstance(outcome, Disproved):
        return f"{name}: counterexample to phi-\n{outcome.witness.pretty()}"
    return name
