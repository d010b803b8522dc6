"""CNF instances, Tseitin transformation and DIMACS I/O."""

from __future__ import annotations

import re
from array import array
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Optional, Sequence, Union

from .graph import AND, FALSE, TRUE, PropositionalGraph


class DimacsError(ValueError):
    pass


class CnfInstance:
    """Clause set stored flat (zero-terminated) to keep large instances compact."""

    def __init__(self, num_vars: int = 0, clauses: Iterable[Sequence[int]] = (),
                 annotation: Optional[dict[int, Hashable]] = None):
        self.num_vars = num_vars
        self.annotation: dict[int, Hashable] = dict(annotation or {})
        self._flat = array("i")
        self.num_clauses = 0
        self.has_empty_clause = False
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, lits: Sequence[int]) -> None:
        lits = list(dict.fromkeys(lits))
        if 0 in lits:
            raise ValueError("literal 0 is reserved")
        s = set(lits)
        if any(-x in s for x in lits):
            return
        if not lits:
            self.has_empty_clause = True
        for x in lits:
            if abs(x) > self.num_vars:
                self.num_vars = abs(x)
        self._flat.extend(lits)
        self._flat.append(0)
        self.num_clauses += 1

    def _append(self, lits: Sequence[int]) -> None:
        # caller guarantees distinct, non-complementary, in-range literals
        self._flat.extend(lits)
        self._flat.append(0)
        self.num_clauses += 1

    def iter_clauses(self) -> Iterator[list[int]]:
        cur: list[int] = []
        for x in self._flat:
            if x == 0:
                yield cur
                cur = []
            else:
                cur.append(x)

    @property
    def clauses(self) -> list[list[int]]:
        return list(self.iter_clauses())

    def check(self, model: Sequence[bool]) -> bool:
        """``model[v]`` is the value of variable ``v`` (index 0 unused)."""
        ok = False
        for x in self._flat:
            if x == 0:
                if not ok:
                    return False
                ok = False
            elif not ok:
                ok = model[x] if x > 0 else not model[-x]
        return True

    def to_dimacs(self, comments: bool = True) -> bytes:
        return emit_dimacs(self, comments)


@dataclass(frozen=True)
class Sat:
    assignment: tuple[bool, ...]  # index 0 unused

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Unsat:
    def __bool__(self):
        return False


@dataclass(frozen=True)
class Unknown:
    reason: str = "timeout"

    def __bool__(self):
        return False


SolveResult = Union[Sat, Unsat, Unknown]


@dataclass
class TseitinResult:
    cnf: CnfInstance
    node_var: dict[int, int] = field(default_factory=dict)

    def lit(self, graph_lit: int) -> int:
        v = self.node_var[abs(graph_lit)]
        return v if graph_lit > 0 else -v


def tseitin(g: PropositionalGraph, polarity: bool = False) -> CnfInstance:
    return tseitin_map(g, polarity).cnf


def tseitin_map(g: PropositionalGraph, polarity: bool = False) -> TseitinResult:
    """Equisatisfiable CNF; one definition variable per reachable gate.

    With ``polarity`` only the implication direction each gate is used in is
    emitted (Plaisted-Greenbaum); the default emits full equivalences.
    """
    kind, args = g.kind, g.args
    # collect reachable nodes and, optionally, the polarities they occur in
    pol = {}  # node -> bitmask 1=positive, 2=negative
    stack = []
    for r in g.roots:
        if abs(r) == TRUE:
            continue
        stack.append((abs(r), 1 if r > 0 else 2))
    while stack:
        node, p = stack.pop()
        if not polarity:
            p = 3
        old = pol.get(node, 0)
        if old | p == old:
            continue
        new = p & ~old
        pol[node] = old | p
        if kind[node] == AND:
            for a in args[node]:
                if abs(a) == TRUE:
                    continue
                q = new if a > 0 else ((new & 1) << 1) | ((new & 2) >> 1)
                stack.append((abs(a), q))

    cnf = CnfInstance()
    node_var: dict[int, int] = {}
    # keep registered variables first, in registration order, for readable output
    order = sorted(pol, key=lambda n: (kind[n] != 0, n))
    for n in order:
        node_var[n] = len(node_var) + 1
        if n in g.key_of:
            cnf.annotation[node_var[n]] = g.key_of[n]
    cnf.num_vars = len(node_var)

    def lit(a: int) -> int:
        v = node_var[abs(a)]
        return v if a > 0 else -v

    for n in order:
        if kind[n] != AND:
            continue
        v = node_var[n]
        ch = [lit(a) for a in args[n]]
        p = pol[n]
        if p & 1:
            for c in ch:
                cnf._append((-v, c))
        if p & 2:
            cnf._append([v] + [-c for c in ch])
    for r in g.roots:
        if r == TRUE:
            continue
        if r == FALSE:
            cnf.add_clause(())
            continue
        cnf.add_clause((lit(r),))
    return TseitinResult(cnf, node_var)


# ---------------------------------------------------------------- DIMACS


def emit_dimacs(c: CnfInstance, comments: bool = True) -> bytes:
    parts: list[str] = []
    if comments:
        for v in sorted(c.annotation):
            parts.append(f"c var {v} {_key_str(c.annotation[v])}\n")
    parts.append(f"p cnf {c.num_vars} {c.num_clauses}\n")
    out = "".join(parts).encode()
    chunks = [out]
    buf: list[str] = []
    for x in c._flat:
        if x == 0:
            buf.append("0\n")
        else:
            buf.append(f"{x} ")
        if len(buf) > 65536:
            chunks.append("".join(buf).encode())
            buf = []
    chunks.append("".join(buf).encode())
    return b"".join(chunks)


def write_dimacs(c: CnfInstance, path, comments: bool = True) -> None:
    with open(path, "wb") as fh:
        fh.write(emit_dimacs(c, comments))


def _key_str(key) -> str:
    if isinstance(key, tuple):
        return " ".join(str(k) for k in key)
    return str(key)


def parse_dimacs(data: Union[bytes, str]) -> CnfInstance:
    text = data.decode() if isinstance(data, bytes) else data
    cnf = CnfInstance()
    declared = None
    cur: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"bad header: {line!r}")
            declared = (int(parts[2]), int(parts[3]))
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                cnf.add_clause(cur)
                cur = []
            else:
                cur.append(x)
    if cur:
        cnf.add_clause(cur)
    if declared is not None:
        cnf.num_vars = max(cnf.num_vars, declared[0])
    return cnf


def parse_dimacs_result(data: Union[bytes, str], num_vars: Optional[int] = None) -> SolveResult:
    """Read solver output in the competition (``s``/``v`` lines) or MiniSat
    result-file (``SAT`` + model line) conventions."""
    text = data.decode(errors="replace") if isinstance(data, bytes) else data
    status = None
    values: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s "):
            word = line[2:].strip().upper()
            status = word
            continue
        if line.upper() in ("SAT", "SATISFIABLE", "UNSAT", "UNSATISFIABLE", "INDET", "UNKNOWN"):
            status = line.upper()
            continue
        body = line[2:] if line.startswith("v ") else line
        if status in ("SAT", "SATISFIABLE") and re.fullmatch(r"[-\d\s]+", body):
            values.extend(int(t) for t in body.split())
            continue
    if status in ("UNSAT", "UNSATISFIABLE"):
        return Unsat()
    if status in ("SAT", "SATISFIABLE"):
        n = max([abs(v) for v in values] + [num_vars or 0])
        model = [False] * (n + 1)
        for v in values:
            if v > 0:
                model[v] = True
        return Sat(tuple(model))
    if status in ("UNKNOWN", "INDET", "INDETERMINATE"):
        return Unknown("external solver gave up")
    raise DimacsError(f"unrecognized solver output:\n{text}")
