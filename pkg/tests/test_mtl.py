import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mpbmc.mtl import (
    DISCRETE, Continuous, FormulaSyntaxError, Interval, IntervalError, Trace, UnsupportedInDomain,
    eval_at, expand_derived, first_violation, granularity_admissible, holds_globally, ival,
    metric_bounds, parse_formula, parse_formulas, pretty, valuation_horizon,
)
from mpbmc.mtl import formula as F
from mpbmc.mtl.semantics import Evaluator

from helpers import Direct, all_traces, discrete_operator_suite, random_core, random_trace

p, q = F.Prop("p"), F.Prop("q")


# ---------------------------------------------------------------- intervals


def test_interval_shorthands():
    assert Interval.point(3) == Interval(Fraction(3), Fraction(3))
    assert Interval.below(5) == Interval(Fraction(0), Fraction(5), True, True)
    assert Interval.at_least(2).hi is None and Interval.at_least(2).hi_open
    assert str(Interval.point(1)) == "=1"
    assert str(ival(0, None, True)) == "(0,inf)"


@pytest.mark.parametrize("args", [(2, 1), (-1, 2), (1, 1, True, False)])
def test_interval_rejects_malformed(args):
    with pytest.raises(IntervalError):
        ival(*args)


def test_interval_rejects_floats():
    with pytest.raises(TypeError):
        Interval.closed(0.5, 1)


@pytest.mark.parametrize("iv,rng", [
    (Interval.closed(0, 2), (0, 2)),
    (ival(0, 2, True, True), (1, 1)),
    (ival(1, 2, True, True), (2, 1)),
    (ival(Fraction(1, 2), Fraction(5, 2)), (1, 2)),
    (Interval.unbounded(), (1, None)),
])
def test_interval_discrete_range(iv, rng):
    assert iv.discrete() == rng


# ---------------------------------------------------------------- parser


def test_parse_until():
    assert parse_formula("(until [0,2] p q)") == F.Until(Interval.closed(0, 2), p, q)


def test_parse_alw_implies():
    phi = parse_formula("(alw (implies p (diamond (0,5] q)))")
    assert phi == F.Alw(F.Implies(p, F.Diamond(ival(0, 5, True), q)))


def test_parse_bad_interval():
    with pytest.raises((FormulaSyntaxError, IntervalError)):
        parse_formula("(until [2,1] p q)")


@pytest.mark.parametrize("text", ["(frob p)", "(and p", "p q", "(until p q)", "(not p q)", ""])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_parse_error_position():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("(and p\n  (frob q))")
    assert e.value.line == 2


def test_parse_params_and_shorthands():
    phi = parse_formula("(diamond-p (0,3*$T/2] (box =1 x))", {"T": Fraction(30)})
    assert phi == F.DiamondP(ival(0, 45, True), F.Box(Interval.point(1), F.Prop("x")))
    assert parse_formula("(box <4 x)").interval == Interval.below(4)
    assert parse_formula("(box >=4 x)").interval == Interval.at_least(4)


def test_parse_multiple_with_comments():
    fs = parse_formulas("; comment\n p\n (not q) ; trailing\n")
    assert fs == [p, F.Not(q)]


def test_parse_odot_and_becomes():
    assert parse_formula("(odot (a) (a b))") == F.BigOdot({"a"}, {"a", "b"})
    assert parse_formula("(becomes x)") == F.Becomes(F.Not(F.Prop("x")), F.Prop("x"))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_pretty_roundtrip(seed):
    phi = random_core(random.Random(seed), ["p", "q", "r"], 3, 4)
    assert parse_formula(pretty(phi)) == phi


@pytest.mark.parametrize("phi", discrete_operator_suite(p, q))
def test_pretty_roundtrip_derived(phi):
    assert parse_formula(pretty(phi)) == phi


# ---------------------------------------------------------------- expansion


def test_expand_becomes_discrete():
    from mpbmc.mtl import unfold

    assert unfold(F.Becomes(p, q), DISCRETE) == F.And((F.DiamondP(Interval.point(1), p),
                                                       F.Diamond(Interval.closed(0, 1), q)))


def test_expand_becomes_next_domains():
    from mpbmc.mtl import unfold

    assert unfold(F.BecomesNext(p, q), DISCRETE) == F.And((p, F.Diamond(Interval.point(1), q)))
    assert unfold(F.BecomesNext(p, q), Continuous(Fraction(1, 2))) == \
        F.And((p, F.Diamond(Interval.point(Fraction(1, 2)), q)))


def test_expand_odot():
    a, b = F.Prop("a"), F.Prop("b")
    assert expand_derived(F.BigOdot({"a"}, {"a", "b"})) == F.And((a, F.Not(b)))


def test_expand_alw_shape():
    from mpbmc.mtl import unfold

    assert unfold(F.Alw(p), DISCRETE) == F.And((p, F.Box(Interval.unbounded(), p), F.BoxP(Interval.unbounded(), p)))
    assert F.is_core(expand_derived(F.Alw(p)))


@pytest.mark.parametrize("node", [F.NowOn(p), F.UpToNow(p), F.NowOnStrict(p), F.UpToNowStrict(p)])
def test_continuous_only_operators(node):
    with pytest.raises(UnsupportedInDomain):
        expand_derived(node, DISCRETE)
    assert F.is_core(expand_derived(node, Continuous(1)))


def test_expand_keep_alw():
    phi = expand_derived(F.Alw(F.Becomes(F.Not(p), p)), keep_alw=True)
    assert isinstance(phi, F.Alw) and F.is_core(phi.arg)


@pytest.mark.parametrize("phi", discrete_operator_suite(p, q))
def test_expand_yields_core(phi):
    assert F.is_core(expand_derived(phi))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_expand_idempotent_on_core(seed):
    phi = random_core(random.Random(seed), ["p", "q"], 3, 4)
    assert expand_derived(phi) == phi
    e = expand_derived(F.Alw(F.Trigger(phi)))
    assert expand_derived(e) == e


# ---------------------------------------------------------------- granularity


def test_metric_bounds_examples():
    assert metric_bounds(F.Until(Interval.closed(0, 2), p, q)) == {2}
    assert metric_bounds(F.Diamond(Interval.unbounded(), p)) == set()
    assert metric_bounds(F.And((F.Box(Interval.closed(3, 6), p), F.Diamond(Interval.point(15), q)))) == {3, 6, 15}


def _bounded(*bs):
    return F.conj(*[F.Diamond(Interval.closed(0, b), p) for b in bs])


def test_granularity_examples():
    assert granularity_admissible(1, _bounded(3, 6, 15, 30))
    assert not granularity_admissible(2, _bounded(3, 6))
    assert granularity_admissible(Fraction(1, 2), _bounded(Fraction(3, 2), Fraction(1, 2)))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=1, max_size=4), st.lists(st.integers(1, 40), min_size=1, max_size=4),
       st.sampled_from([Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(5)]))
def test_granularity_conjunction(xs, ys, delta):
    a, b = _bounded(*xs), _bounded(*ys)
    if granularity_admissible(delta, a) and granularity_admissible(delta, b):
        assert granularity_admissible(delta, F.And((a, b)))


# ---------------------------------------------------------------- semantics


def test_trace_unrolling():
    tr = Trace.of([{"a"}, {"b"}, {"c"}], 1)
    assert [sorted(tr.at(t)) for t in range(6)] == [["a"], ["b"], ["c"], ["b"], ["c"], ["b"]]
    with pytest.raises(ValueError):
        Trace.of([{"a"}], 1)


def test_eval_examples():
    const_p = Trace.of([{"p"}], 0)
    assert eval_at(const_p, 0, expand_derived(F.Diamond(Interval.closed(0, 2), p)))
    for tr in all_traces(["p"], 2):
        assert not eval_at(tr, 0, expand_derived(F.DiamondP(Interval.point(1), p)))
    # [DERIVED] brute-force unrolling: p holds at instant 1
    tr = Trace.of([set(), {"p"}, set()], 2)
    assert eval_at(tr, 0, F.Until(Interval.closed(1, 2), F.TRUE, p))


def test_holds_globally_examples():
    assert holds_globally(Trace.of([{"p"}], 0), p)
    assert not holds_globally(Trace.of([{"p"}, set()], 1), p)
    assert first_violation(Trace.of([{"p"}, set()], 1), p) == 1
    # [DERIVED] periodicity reached after one traversal of the loop
    assert holds_globally(Trace.of([set(), {"p"}], 0), expand_derived(F.Diamond(Interval.closed(0, 1), p)))


def test_past_at_origin():
    tr = Trace.of([{"p"}], 0)
    assert not eval_at(tr, 0, expand_derived(F.DiamondP(Interval.closed(1, 2), p)))
    assert eval_at(tr, 0, expand_derived(F.BoxP(Interval.closed(1, 2), F.FALSE)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_horizon_is_a_fixpoint(seed):
    rng = random.Random(seed)
    phi = random_core(rng, ["p", "q"], 3, 4)
    tr = random_trace(rng, ["p", "q"], rng.randint(0, 5))
    H = valuation_horizon(tr, phi)
    ev = Evaluator(tr)
    within = all(ev.val(phi, t) for t in range(H + 1))
    assert holds_globally(tr, phi) == within
    assert within == all(ev.val(phi, t) for t in range(H + 2 * tr.period + 5))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_padding_preserves_semantics(seed):
    rng = random.Random(seed)
    phi = random_core(rng, ["p", "q"], 3, 4)
    tr = random_trace(rng, ["p", "q"], rng.randint(0, 4))
    padded = tr.padded(rng.randint(1, 3))
    assert all(eval_at(tr, t, phi) == eval_at(padded, t, phi) for t in range(12))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_core_evaluator_matches_direct(seed):
    rng = random.Random(seed)
    phi = random_core(rng, ["p", "q"], 3, 3)
    tr = random_trace(rng, ["p", "q"], rng.randint(0, 4))
    d, ev = Direct(tr), Evaluator(tr)
    assert all(d.ev(phi, t) == ev.val(phi, t) for t in range(2 * tr.k + 4))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_operator_suite_small(k):
    # reduced copy of the acceptance operator suite
    ops = discrete_operator_suite(p, q)
    exp = [expand_derived(o) for o in ops]
    for tr in all_traces(["p", "q"], k):
        d, ev = Direct(tr), Evaluator(tr)
        for o, e in zip(ops, exp):
            for t in range(2 * k + 3):
                assert d.ev(o, t) == ev.val(e, t), (o, tr, t)
