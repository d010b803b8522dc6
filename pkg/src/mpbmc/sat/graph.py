"""Structurally hashed propositional graphs.

Nodes are integers; a literal is a signed node id, so negation is free.
Node 1 is the constant TRUE (``-1`` is FALSE).  Internal nodes are n-ary
conjunctions; disjunctions are negated conjunctions of negated literals.
"""

from __future__ import annotations

from typing import Hashable, Iterable

TRUE = 1
FALSE = -1

VAR = 0
AND = 1


class PropositionalGraph:
    def __init__(self):
        # index 0 unused, index 1 is the constant
        self.kind: list[int] = [-1, -1]
        self.args: list[tuple[int, ...]] = [(), ()]
        self.keys: dict[Hashable, int] = {}
        self.key_of: dict[int, Hashable] = {}
        self._hash: dict[tuple[int, ...], int] = {}
        self.roots: list[int] = []

    @property
    def num_nodes(self) -> int:
        return len(self.kind) - 1

    def var(self, key: Hashable) -> int:
        node = self.keys.get(key)
        if node is None:
            node = len(self.kind)
            self.kind.append(VAR)
            self.args.append(())
            self.keys[key] = node
            self.key_of[node] = key
        return node

    def and_(self, lits: Iterable[int]) -> int:
        seen = set()
        out = []
        for lit in lits:
            if lit == TRUE or lit in seen:
                continue
            if lit == FALSE or -lit in seen:
                return FALSE
            seen.add(lit)
            out.append(lit)
        if not out:
            return TRUE
        if len(out) == 1:
            return out[0]
        out.sort()
        key = tuple(out)
        node = self._hash.get(key)
        if node is None:
            node = len(self.kind)
            self.kind.append(AND)
            self.args.append(key)
            self._hash[key] = node
        return node

    def or_(self, lits: Iterable[int]) -> int:
        return -self.and_(-lit for lit in lits)

    def and2(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE or a == -b:
            return FALSE
        if a == TRUE or a == b:
            return b
        if b == TRUE:
            return a
        return self.and_((a, b))

    def or2(self, a: int, b: int) -> int:
        return -self.and2(-a, -b)

    def implies(self, a: int, b: int) -> int:
        return self.or2(-a, b)

    def iff(self, a: int, b: int) -> int:
        if a == b:
            return TRUE
        if a == -b:
            return FALSE
        return self.and2(self.or2(-a, b), self.or2(a, -b))

    def assert_(self, lit: int) -> None:
        self.roots.append(lit)

    def evaluate(self, assignment: dict[Hashable, bool]) -> list[bool]:
        """Value of every node under an assignment of the registered keys."""
        val = [False] * len(self.kind)
        val[1] = True
        for node in range(2, len(self.kind)):
            if self.kind[node] == VAR:
                val[node] = bool(assignment.get(self.key_of[node], False))
            else:
                val[node] = all(val[a] if a > 0 else not val[-a] for a in self.args[node])
        return val

    def lit_value(self, vals: list[bool], lit: int) -> bool:
        return vals[lit] if lit > 0 else not vals[-lit]
