"""Three-valued guard evaluation checked against an independent oracle.

The oracle encodes Kleene logic numerically (FALSE=0, UNKNOWN=0.5,
TRUE=1; and=min, or=max, not=1-x) with no shared code with the
interpreter, then every Not/And/Or case is enumerated exhaustively.
"""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from charlogic.dsl.ast import And, Check, Const, Not, Or
from charlogic.engine.interpreter import eval_expr
from charlogic.engine.types import Checked, Scene, Tri
from charlogic.oracles.condition import ConditionVerdict

# --- independent truth-table oracle ---

_NUM = {Tri.FALSE: 0.0, Tri.UNKNOWN: 0.5, Tri.TRUE: 1.0}
_TRI = {value: key for key, value in _NUM.items()}


def kleene_not(a: Tri) -> Tri:
    return _TRI[1.0 - _NUM[a]]


def kleene_and(a: Tri, b: Tri) -> Tri:
    return _TRI[min(_NUM[a], _NUM[b])]


def kleene_or(a: Tri, b: Tri) -> Tri:
    return _TRI[max(_NUM[a], _NUM[b])]


TRIS = (Tri.FALSE, Tri.UNKNOWN, Tri.TRUE)


class CountingOracle:
    """Answers questions of the form 'q:<t>?' with the named value and
    counts how often each question is actually asked."""

    def __init__(self):
        self.asked: list[str] = []

    def check_condition(self, scene: Scene, question: str) -> ConditionVerdict:
        self.asked.append(question)
        name = question[len("q:"):-1]
        return ConditionVerdict(Tri(name), "table", "")


def q(value: Tri) -> Check:
    return Check(f"q:{value.value}?")


SCENE = Scene(id="sc", context="x")


def run(expr, oracle=None):
    oracle = oracle or CountingOracle()
    return eval_expr(expr, SCENE, oracle, random.Random(0)), oracle


def test_not_all_cases():
    for a in TRIS:
        got, _ = run(Not(q(a)))
        assert got is kleene_not(a), a


def test_and_all_nine_cases():
    for a in TRIS:
        for b in TRIS:
            got, _ = run(And(q(a), q(b)))
            assert got is kleene_and(a, b), (a, b)


def test_or_all_nine_cases():
    for a in TRIS:
        for b in TRIS:
            got, _ = run(Or(q(a), q(b)))
            assert got is kleene_or(a, b), (a, b)


def test_and_short_circuits_on_false_left():
    for a in TRIS:
        _, oracle = run(And(q(a), q(Tri.TRUE)))
        expected = 1 if a is Tri.FALSE else 2
        assert len(oracle.asked) == expected, a


def test_or_short_circuits_on_true_left():
    for a in TRIS:
        _, oracle = run(Or(q(a), q(Tri.TRUE)))
        expected = 1 if a is Tri.TRUE else 2
        assert len(oracle.asked) == expected, a


def test_unknown_left_still_evaluates_right():
    # UNKNOWN does not settle either connective
    _, oracle = run(And(q(Tri.UNKNOWN), q(Tri.FALSE)))
    assert oracle.asked == ["q:unknown?", "q:false?"]
    _, oracle = run(Or(q(Tri.UNKNOWN), q(Tri.TRUE)))
    assert oracle.asked == ["q:unknown?", "q:true?"]


def test_short_circuit_emits_no_trace_for_right_operand():
    trace = []
    oracle = CountingOracle()
    eval_expr(And(q(Tri.FALSE), q(Tri.TRUE)), SCENE, oracle,
              random.Random(0), trace=trace)
    checked = [e for e in trace if isinstance(e, Checked)]
    assert [e.question for e in checked] == ["q:false?"]


def test_const_never_asks_the_oracle():
    got, oracle = run(And(Const(False), q(Tri.TRUE)))
    assert got is Tri.FALSE
    assert oracle.asked == []


# --- property: arbitrary trees agree with the numeric evaluator ---

def leaf(values):
    return st.sampled_from([q(v) for v in values])


exprs = st.recursive(
    leaf(TRIS) | st.sampled_from([Const(True), Const(False)]),
    lambda inner: st.one_of(
        st.builds(Not, inner),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
    ),
    max_leaves=12)


def reference_eval(expr) -> Tri:
    if isinstance(expr, Const):
        return Tri.TRUE if expr.value else Tri.FALSE
    if isinstance(expr, Check):
        return Tri(expr.question[len("q:"):-1])
    if isinstance(expr, Not):
        return kleene_not(reference_eval(expr.operand))
    if isinstance(expr, And):
        return kleene_and(reference_eval(expr.left),
                          reference_eval(expr.right))
    if isinstance(expr, Or):
        return kleene_or(reference_eval(expr.left),
                         reference_eval(expr.right))
    raise TypeError(expr)


@given(expr=exprs)
@settings(max_examples=300, deadline=None)
def test_arbitrary_trees_match_reference(expr):
    got, _ = run(expr)
    assert got is reference_eval(expr)
