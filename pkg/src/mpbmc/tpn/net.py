"""1-safe timed Petri nets: model, text format, structural and timing checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from ..mtl.parser import eval_bound


@dataclass(frozen=True)
class TimedPetriNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    flow: frozenset[tuple[str, str]]
    initial: frozenset[str]
    alpha: Mapping[str, Fraction]
    beta: Mapping[str, Optional[Fraction]]  # None is +infinity
    name: str = "net"

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "flow", frozenset(self.flow))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "alpha", {u: Fraction(v) for u, v in self.alpha.items()})
        object.__setattr__(self, "beta", {u: None if v is None else Fraction(v) for u, v in self.beta.items()})

    def pre(self, node: str) -> tuple[str, ...]:
        return tuple(sorted(a for a, b in self.flow if b == node))

    def post(self, node: str) -> tuple[str, ...]:
        return tuple(sorted(b for a, b in self.flow if a == node))

    def bounds(self) -> set[Fraction]:
        out = set(self.alpha.values())
        out |= {b for b in self.beta.values() if b is not None}
        return {b for b in out if b != 0}


# atom naming; the prefixes keep the three families disjoint


def mu(p: str) -> str:
    return f"mu.{p}"


def eps(p: str) -> str:
    return f"eps.{p}"


def tau(u: str) -> str:
    return f"tau.{u}"


def net_atoms(net: TimedPetriNet) -> list[str]:
    return [mu(p) for p in net.places] + [eps(p) for p in net.places] + [tau(u) for u in net.transitions]


# ---------------------------------------------------------------- diagnostics


@dataclass(frozen=True)
class Violation:
    node: str

    @property
    def label(self) -> str:
        return type(self).__name__

    def __str__(self):
        return f"{self.label}({self.node})"


class IsolatedNode(Violation):
    pass


class UnknownNode(Violation):
    pass


class BadArc(Violation):
    """Arc between two places or two transitions."""


class DuplicateNode(Violation):
    pass


class InitialNotPlace(Violation):
    pass


class MissingBounds(Violation):
    pass


class BoundsInverted(Violation):
    pass


class AlphaTooSmall(Violation):
    pass


class BetaTooClose(Violation):
    pass


@dataclass(frozen=True)
class NotMultipleOfDelta(Violation):
    which: str = "alpha"

    def __str__(self):
        return f"{self.label}({self.node}.{self.which})"


def validate_structure(net: TimedPetriNet) -> list[Violation]:
    out: list[Violation] = []
    P, T = set(net.places), set(net.transitions)
    names = list(net.places) + list(net.transitions)
    for x in sorted({n for n in names if names.count(n) > 1}):
        out.append(DuplicateNode(x))
    for a, b in sorted(net.flow):
        for x in (a, b):
            if x not in P and x not in T:
                out.append(UnknownNode(x))
        if (a in P and b in P) or (a in T and b in T):
            out.append(BadArc(f"{a}->{b}"))
    for p in sorted(net.initial - P):
        out.append(InitialNotPlace(p))
    for x in list(net.places) + list(net.transitions):
        if not net.pre(x) and not net.post(x):
            out.append(IsolatedNode(x))
    for u in net.transitions:
        if u not in net.alpha or u not in net.beta:
            out.append(MissingBounds(u))
        elif net.beta[u] is not None and net.alpha[u] > net.beta[u]:
            out.append(BoundsInverted(u))
    return out


def check_nondegenerate(net: TimedPetriNet, delta) -> list[Violation]:
    """alpha >= 3 delta, beta >= alpha + 2 delta, and delta divides both."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    out: list[Violation] = []
    for u in net.transitions:
        a, b = net.alpha[u], net.beta[u]
        if a < 3 * delta:
            out.append(AlphaTooSmall(u))
        if b is not None and b < a + 2 * delta:
            out.append(BetaTooClose(u))
        if (a / delta).denominator != 1:
            out.append(NotMultipleOfDelta(u, "alpha"))
        if b is not None and (b / delta).denominator != 1:
            out.append(NotMultipleOfDelta(u, "beta"))
    return out


# ---------------------------------------------------------------- text format


class NetSyntaxError(ValueError):
    def __init__(self, msg: str, line: int):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def parse_net(text: str, params: Optional[Mapping[str, Fraction]] = None, name: str = "net") -> TimedPetriNet:
    """Read ``place``/``trans``/``arc`` lines; ``#`` starts a comment."""
    places, trans, flow, marked = [], [], set(), set()
    alpha, beta = {}, {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        try:
            if kw == "place":
                if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "marked"):
                    raise NetSyntaxError("expected: place <name> [marked]", no)
                places.append(parts[1])
                if len(parts) == 3:
                    marked.add(parts[1])
            elif kw == "trans":
                if len(parts) != 6 or parts[2] != "alpha" or parts[4] != "beta":
                    raise NetSyntaxError("expected: trans <name> alpha <rat> beta <rat|inf>", no)
                trans.append(parts[1])
                alpha[parts[1]] = eval_bound(parts[3], params)
                beta[parts[1]] = None if parts[5] == "inf" else eval_bound(parts[5], params)
            elif kw == "arc":
                if len(parts) != 3:
                    raise NetSyntaxError("expected: arc <from> <to>", no)
                flow.add((parts[1], parts[2]))
            else:
                raise NetSyntaxError(f"unknown keyword {kw!r}", no)
        except ValueError as e:
            if isinstance(e, NetSyntaxError):
                raise
            raise NetSyntaxError(str(e), no) from e
    return TimedPetriNet(tuple(places), tuple(trans), frozenset(flow), frozenset(marked), alpha, beta, name)


def format_net(net: TimedPetriNet) -> str:
    def rat(x):
        if x is None:
            return "inf"
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    lines = [f"place {p}" + (" marked" if p in net.initial else "") for p in net.places]
    lines += [f"trans {u} alpha {rat(net.alpha[u])} beta {rat(net.beta[u])}" for u in net.transitions]
    lines += [f"arc {a} {b}" for a, b in sorted(net.flow)]
    return "\n".join(lines) + "\n"
