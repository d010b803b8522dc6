"""Model files: parameters, fragments and properties in one text file.

::

    param T = 30
    delta 1
    bound 90
    fragment net kind tpn file net.tpn
    fragment bridge kind mtl-discrete
      (implies try (diamond-p (0,$T/2] mu.data_retrieved))
    end
    property p1
      (diamond (0,$T] mu.data_retrieved)
    end

Outside blocks ``#`` starts a comment.  Inline block bodies are handed to the
fragment parser unchanged, up to a line reading ``end``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from ..discretize import SystemModel
from ..mtl import formula as F
from ..mtl.parser import eval_bound, parse_formulas
from ..tpn.net import TimedPetriNet, parse_net

KINDS = ("tpn", "mtl-continuous", "mtl-discrete")


class ModelSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, path: Optional[str] = None):
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}: {msg}")
        self.line = line


class FragmentError(ValueError):
    """A fragment or property failed to parse or validate."""

    def __init__(self, name: str, why: str):
        super().__init__(f"fragment {name}: {why}")
        self.name = name


@dataclass
class Block:
    name: str
    text: str
    kind: str = "mtl"
    origin: Optional[str] = None


@dataclass
class ModelFile:
    params: dict[str, str] = field(default_factory=dict)  # unevaluated right-hand sides
    delta: Optional[str] = None
    bound: Optional[int] = None
    fragments: list[Block] = field(default_factory=list)
    properties: dict[str, Block] = field(default_factory=dict)
    base_dir: str = "."


def _read(base: str, rel: str, line: int, path) -> tuple[str, str]:
    full = rel if os.path.isabs(rel) else os.path.join(base, rel)
    try:
        with open(full, encoding="utf-8") as fh:
            return fh.read(), full
    except OSError as e:
        raise ModelSyntaxError(f"cannot read {rel}: {e.strerror}", line, path) from e


def parse_model(text: str, base_dir: str = ".", path: Optional[str] = None) -> ModelFile:
    mf = ModelFile(base_dir=base_dir)
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        no = i + 1
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        parts = line.split()
        kw = parts[0]
        if kw == "param":
            rest = line[len("param"):].strip()
            name, eq, value = rest.partition("=")
            name = name.strip()
            if not eq or not name.isidentifier() or not value.strip():
                raise ModelSyntaxError("expected: param <name> = <value>", no, path)
            mf.params[name] = value.strip()
        elif kw == "delta":
            if len(parts) != 2:
                raise ModelSyntaxError("expected: delta <rational>", no, path)
            mf.delta = parts[1]
        elif kw == "bound":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ModelSyntaxError("expected: bound <int>", no, path)
            mf.bound = int(parts[1])
        elif kw in ("fragment", "property"):
            if kw == "fragment":
                if len(parts) not in (4, 6) or parts[2] != "kind" or parts[3] not in KINDS:
                    raise ModelSyntaxError(f"expected: fragment <name> kind {'|'.join(KINDS)} [file <path>]",
                                           no, path)
                name, kind, tail = parts[1], parts[3], parts[4:]
            else:
                if len(parts) not in (2, 4):
                    raise ModelSyntaxError("expected: property <label> [file <path>]", no, path)
                name, kind, tail = parts[1], "mtl", parts[2:]
            if tail and tail[0] != "file":
                raise ModelSyntaxError(f"unexpected {tail[0]!r}", no, path)
            if tail:
                body, origin = _read(base_dir, tail[1], no, path)
            else:
                start = i
                while i < len(lines) and lines[i].strip() != "end":
                    i += 1
                if i == len(lines):
                    raise ModelSyntaxError(f"{kw} {name} has no closing 'end'", no, path)
                body, origin = "\n".join(lines[start:i]), None
                i += 1
            blk = Block(name, body, kind, origin)
            if kw == "fragment":
                if any(b.name == name for b in mf.fragments):
                    raise ModelSyntaxError(f"duplicate fragment {name!r}", no, path)
                mf.fragments.append(blk)
            else:
                if name in mf.properties:
                    raise ModelSyntaxError(f"duplicate property {name!r}", no, path)
                mf.properties[name] = blk
        else:
            raise ModelSyntaxError(f"unknown keyword {kw!r}", no, path)
    return mf


def load_model(path: str) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_model(text, os.path.dirname(os.path.abspath(path)), path)


def resolve_params(mf: ModelFile, delta=None, overrides: Optional[Mapping[str, str]] = None) -> dict[str, Fraction]:
    """Evaluate parameters in file order; ``delta`` is available as ``$delta``."""
    raw = dict(mf.params)
    raw.update(overrides or {})
    d = delta if delta is not None else mf.delta
    if d is None:
        raise ValueError("no delta given in the model or on the command line")
    out = {"delta": Fraction(d) if not isinstance(d, str) else eval_bound(d)}
    if out["delta"] <= 0:
        raise ValueError("delta must be positive")
    for name, value in raw.items():
        out[name] = eval_bound(value, out) if isinstance(value, str) else Fraction(value)
    return out


def _formulas(blk: Block, params) -> list[F.Formula]:
    try:
        fs = parse_formulas(blk.text, params)
    except ValueError as e:
        raise FragmentError(blk.name, str(e)) from e
    if not fs:
        raise FragmentError(blk.name, "no formula")
    return fs


def build_system(mf: ModelFile, delta=None, bound: Optional[int] = None,
                 overrides: Optional[Mapping[str, str]] = None) -> SystemModel:
    params = resolve_params(mf, delta, overrides)
    k = bound if bound is not None else mf.bound
    if k is None:
        raise ValueError("no bound given in the model or on the command line")
    cont: list[tuple[str, object]] = []
    disc: list[tuple[str, F.Formula]] = []
    for blk in mf.fragments:
        if blk.kind == "tpn":
            try:
                cont.append((blk.name, parse_net(blk.text, params, blk.name)))
            except ValueError as e:
                raise FragmentError(blk.name, str(e)) from e
            continue
        fs = _formulas(blk, params)
        names = [blk.name] if len(fs) == 1 else [f"{blk.name}#{j}" for j in range(len(fs))]
        dest = cont if blk.kind == "mtl-continuous" else disc
        dest.extend(zip(names, fs))
    m = SystemModel(cont, disc, params["delta"], k, params)
    try:
        m.validate()
    except ValueError as e:
        msg = str(e)
        name = msg.split(":", 1)[0].split()[-1] if msg.startswith(("net ", "fragment ")) else "model"
        raise FragmentError(name, msg.split(":", 1)[-1].strip()) from e
    return m


def property_formula(mf: ModelFile, label: str, params: Mapping[str, Fraction]) -> F.Formula:
    """Conjunction of the formulas of a property block or of a formula file."""
    if label in mf.properties:
        blk = mf.properties[label]
    elif os.path.isfile(label):
        with open(label, encoding="utf-8") as fh:
            blk = Block(os.path.basename(label), fh.read(), "mtl", label)
    else:
        known = ", ".join(mf.properties) or "none"
        raise ValueError(f"unknown property {label!r} (known: {known})")
    return F.conj(*_formulas(blk, params))


def net_fragments(m: SystemModel) -> list[TimedPetriNet]:
    return [f for _, f in m.continuous_fragments if isinstance(f, TimedPetriNet)]
