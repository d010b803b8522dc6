"""Exhaustive lasso enumeration: ground truth for small bounds.

Traces are ordered lexicographically: the state word ``states[0..k]`` is read
as a binary number (position-major, atoms in the given order, most
significant first) and, for equal words, the loop start increases.  Within one
loop start every word is evaluated at once as a numpy batch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .mtl import formula as F
from .mtl.semantics import Trace
from .bmc import KCounterexample, KSat, KUnsat, KValid

DEFAULT_CEILING = 24


class CeilingExceeded(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationSpace:
    atoms: tuple[str, ...]
    k: int
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("duplicate atom")
        if self.bits > self.ceiling:
            raise CeilingExceeded(f"{len(self.atoms)} atoms x {self.k + 1} states = {self.bits} bits "
                                  f"exceeds the ceiling of {self.ceiling}")

    @property
    def bits(self) -> int:
        return len(self.atoms) * (self.k + 1)

    @property
    def size(self) -> int:
        return (2 ** self.bits) * (self.k + 1)

    def trace(self, word: int, loop: int) -> Trace:
        n = len(self.atoms)
        states = []
        for t in range(self.k + 1):
            states.append(frozenset(a for j, a in enumerate(self.atoms)
                                    if (word >> (self.bits - 1 - (t * n + j))) & 1))
        return Trace(tuple(states), loop)


def enumerate_lassos(space: EnumerationSpace) -> Iterator[Trace]:
    for word in range(2 ** space.bits):
        for loop in range(space.k + 1):
            yield space.trace(word, loop)


# ---------------------------------------------------------------- batch semantics


def _offset(phi, period: int) -> int:
    # instants from the loop start after which phi repeats
    memo = {}

    def go(n):
        if id(n) in memo:
            return memo[id(n)]
        if isinstance(n, F.Alw):
            r = 0
        else:
            r = max((go(c) for c in n.children()), default=0)
            if isinstance(n, F.Since):
                a, b = n.interval.discrete()
                r += a + period if b is None else b
        memo[id(n)] = r
        return r

    return go(phi)


class _Batch:
    """Values of subformulas for every state word and one loop start.

    A value is an array of shape (words, W) with W = loop + offset + period;
    positions past W repeat the last period.
    """

    def __init__(self, space: EnumerationSpace, loop: int):
        self.space = space
        self.loop = loop
        self.p = space.k + 1 - loop
        self.words = np.arange(2 ** space.bits, dtype=np.int64)
        self.memo: dict[int, tuple] = {}

    def start(self, n) -> int:
        return self.loop + _offset(n, self.p)

    def ext(self, n, length: int) -> np.ndarray:
        arr = self.value(n)
        W = arr.shape[1]
        if length <= W:
            return arr[:, :length]
        st = W - self.p
        idx = np.arange(length)
        idx = np.where(idx < W, idx, st + (idx - st) % self.p)
        return arr[:, idx]

    def value(self, n) -> np.ndarray:
        hit = self.memo.get(id(n))
        if hit is not None and hit[0] is n:
            return hit[1]
        out = self._compute(n, self.start(n) + self.p)
        self.memo[id(n)] = (n, out)
        return out

    def _atom(self, name: str, W: int) -> np.ndarray:
        sp = self.space
        j = sp.atoms.index(name)
        n = len(sp.atoms)
        cols = []
        for t in range(W):
            u = t if t <= sp.k else self.loop + (t - self.loop) % self.p
            shift = sp.bits - 1 - (u * n + j)
            cols.append(((self.words >> shift) & 1).astype(bool))
        return np.stack(cols, axis=1)

    def _compute(self, n, W: int) -> np.ndarray:
        M = len(self.words)
        if isinstance(n, F.Prop):
            if n.name not in self.space.atoms:
                raise ValueError(f"atom {n.name!r} not in the enumeration space")
            return self._atom(n.name, W)
        if isinstance(n, F.Const):
            return np.full((M, W), n.value)
        if isinstance(n, F.Not):
            return ~self.ext(n.arg, W)
        if isinstance(n, F.And):
            out = np.ones((M, W), dtype=bool)
            for a in n.args:
                out &= self.ext(a, W)
            return out
        if isinstance(n, F.Or):
            out = np.zeros((M, W), dtype=bool)
            for a in n.args:
                out |= self.ext(a, W)
            return out
        if isinstance(n, F.Implies):
            return ~self.ext(n.left, W) | self.ext(n.right, W)
        if isinstance(n, F.Iff):
            return self.ext(n.left, W) == self.ext(n.right, W)
        if isinstance(n, F.Alw):
            inner = self.value(n.arg)
            return np.repeat(inner.all(axis=1, keepdims=True), W, axis=1)
        if isinstance(n, F.Until):
            return self._until(n, W)
        if isinstance(n, F.Since):
            return self._since(n, W)
        raise TypeError(f"{type(n).__name__} is not a core node")

    def _until(self, n, W):
        a, b = n.interval.discrete()
        if b is not None:
            if a > b:
                return np.zeros((len(self.words), W), dtype=bool)
            f = self.ext(n.left, W + b)
            g = self.ext(n.right, W + b)
            out = np.zeros((len(self.words), W), dtype=bool)
            run = np.ones((len(self.words), W), dtype=bool)
            for d in range(b + 1):
                run &= f[:, d:d + W]
                if d >= a:
                    out |= run & g[:, d:d + W]
            return out
        # least fixpoint of U = f & (g | next U) on the cyclic position graph
        st = max(self.start(n.left), self.start(n.right))
        W0 = max(st + self.p, W + a)
        f = self.ext(n.left, W0)
        g = self.ext(n.right, W0)
        nxt = np.arange(1, W0 + 1)
        nxt[-1] = W0 - self.p
        u = np.zeros_like(f)
        while True:
            new = f & (g | u[:, nxt])
            if np.array_equal(new, u):
                break
            u = new
        run = np.ones((len(self.words), W), dtype=bool)
        for d in range(a):
            run &= f[:, d:d + W]
        return run & u[:, a:a + W]

    def _since(self, n, W):
        a, b = n.interval.discrete()
        M = len(self.words)
        f = self.ext(n.left, W)
        g = self.ext(n.right, W)
        hi = W - 1 if b is None else min(b, W - 1)
        out = np.zeros((M, W), dtype=bool)
        run = np.ones((M, W), dtype=bool)
        for d in range(hi + 1):
            shf = np.zeros((M, W), dtype=bool)
            shg = np.zeros((M, W), dtype=bool)
            shf[:, d:] = f[:, :W - d]
            shg[:, d:] = g[:, :W - d]
            run &= shf
            if d >= a:
                out |= run & shg
        return out


def batch_values(phi: F.Formula, space: EnumerationSpace, loop: int) -> np.ndarray:
    """Array (words, W) of ``phi`` at positions 0..W-1 for one loop start."""
    return _Batch(space, loop).value(phi)


def _first(space: EnumerationSpace, hits: Sequence[np.ndarray]):
    best = None
    for loop, h in enumerate(hits):
        idx = np.flatnonzero(h)
        if idx.size and (best is None or idx[0] < best[0]):
            best = (int(idx[0]), loop)
    return None if best is None else space.trace(*best)


def brute_satisfiable(phi: F.Formula, space: EnumerationSpace):
    """KSat with the first satisfying lasso (at position 0), else KUnsat."""
    hits = [batch_values(phi, space, l)[:, 0] for l in range(space.k + 1)]
    w = _first(space, hits)
    return KUnsat() if w is None else KSat(w)


def brute_valid(phi: F.Formula, space: EnumerationSpace):
    """KValid iff every lasso satisfies ``phi`` at every position."""
    hits = [~batch_values(phi, space, l).all(axis=1) for l in range(space.k + 1)]
    w = _first(space, hits)
    return KValid() if w is None else KCounterexample(w)


def count_models(phi: F.Formula, space: EnumerationSpace, globally: bool = True) -> int:
    total = 0
    for l in range(space.k + 1):
        v = batch_values(phi, space, l)
        total += int((v.all(axis=1) if globally else v[:, 0]).sum())
    return total
