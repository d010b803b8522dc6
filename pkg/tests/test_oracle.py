import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mpbmc.bmc import KCounterexample, KSat, KUnsat, KValid
from mpbmc.discretize import under_approx
from mpbmc.mtl import DISCRETE, Interval, eval_at, expand_derived, holds_globally
from mpbmc.mtl import formula as F
from mpbmc.mtl.semantics import Evaluator
from mpbmc.oracle import (
    CeilingExceeded, EnumerationSpace, batch_values, brute_satisfiable, brute_valid, count_models,
    enumerate_lassos,
)

from helpers import random_core

p, q = F.Prop("p"), F.Prop("q")


def is_future(phi: F.Formula) -> bool:
    return not isinstance(phi, F.Since) and all(is_future(c) for c in phi.children())


@pytest.mark.parametrize("atoms,k,n", [(["p"], 0, 2), (["p"], 1, 8), (["p", "q"], 1, 32)])
def test_trace_counts(atoms, k, n):
    s = EnumerationSpace(atoms, k)
    traces = list(enumerate_lassos(s))
    assert len(traces) == n == s.size
    assert len(set(traces)) == n


def test_enumeration_order():
    ts = list(enumerate_lassos(EnumerationSpace(["p"], 1)))
    assert [(tuple(sorted(x) for x in t.states), t.loop) for t in ts[:4]] == [
        (([], []), 0), (([], []), 1), (([], ["p"]), 0), (([], ["p"]), 1)]


def test_ceiling():
    with pytest.raises(CeilingExceeded):
        EnumerationSpace(["a", "b", "c"], 8)
    assert EnumerationSpace(["a", "b", "c"], 8, ceiling=27).bits == 27


def test_duplicate_atoms_rejected():
    with pytest.raises(ValueError):
        EnumerationSpace(["p", "p"], 1)


def test_diamond_satisfiable():
    v = brute_satisfiable(expand_derived(F.Diamond(Interval.closed(0, 2), p)), EnumerationSpace(["p"], 2))
    assert isinstance(v, KSat) and any("p" in v.trace.at(t) for t in range(3))


def test_becomes_under_approximation_unsat():
    x = F.Prop("x")
    phi = expand_derived(under_approx(F.Becomes(F.Not(x), x), 1), DISCRETE)
    for k in range(0, 6):
        assert isinstance(brute_satisfiable(phi, EnumerationSpace(["x"], k)), KUnsat)


def test_valid_examples():
    s = EnumerationSpace(["p"], 2)
    assert isinstance(brute_valid(F.Or((p, F.Not(p))), s), KValid)
    v = brute_valid(expand_derived(F.Diamond(Interval.closed(0, 1), p)), s)
    assert isinstance(v, KCounterexample)
    # first counterexample in lexicographic order: the constant empty lasso
    assert v.trace.states == (frozenset(),) * 3 and v.trace.loop == 0


def test_count_models_true():
    s = EnumerationSpace(["p", "q"], 2)
    assert count_models(F.TRUE, s) == s.size
    # [DERIVED] p at position 0: half of all state words
    assert count_models(p, s, globally=False) == s.size // 2


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_batch_matches_evaluator(seed):
    rng = random.Random(seed)
    atoms = ["p", "q"]
    k = rng.randint(0, 3)
    phi = random_core(rng, atoms, 3, min(k, 3))
    s = EnumerationSpace(atoms, k)
    loop = rng.randint(0, k)
    vals = batch_values(phi, s, loop)
    for word in rng.sample(range(2 ** s.bits), min(6, 2 ** s.bits)):
        tr = s.trace(word, loop)
        ev = Evaluator(tr)
        assert [ev.val(phi, t) for t in range(vals.shape[1])] == list(vals[word])


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_valid_iff_negated_closure_unsat(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 3)
    phi = random_core(rng, ["p", "q"], 3, min(k, 3))
    s = EnumerationSpace(["p", "q"], k)
    valid = isinstance(brute_valid(phi, s), KValid)
    assert valid == isinstance(brute_satisfiable(expand_derived(F.Not(F.Alw(phi))), s), KUnsat)
    if is_future(phi):
        # every suffix of a lasso is again a lasso of the same size
        assert valid == isinstance(brute_satisfiable(F.Not(phi), s), KUnsat)


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_witnesses_revalidate(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 3)
    phi = random_core(rng, ["p", "q"], 3, min(k, 3))
    s = EnumerationSpace(["p", "q"], k)
    v = brute_satisfiable(phi, s)
    if isinstance(v, KSat):
        assert eval_at(v.trace, 0, phi)
    c = brute_valid(phi, s)
    if isinstance(c, KCounterexample):
        assert not holds_globally(c.trace, phi)


def test_native_alw_constant_over_positions():
    s = EnumerationSpace(["p"], 2)
    v = batch_values(F.Alw(p), s, 1)
    assert np.all(v == v[:, :1])
