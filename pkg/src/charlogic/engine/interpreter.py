"""Tree-walking interpreter for profile-logic programs.

Guards evaluate in Kleene three-valued logic with left-to-right
short-circuit: FALSE settles an 'and' and TRUE settles an 'or' without
touching the right operand, so no oracle call (and no trace event) is
recorded for short-circuited subexpressions. An UNKNOWN guard behaves
like FALSE for control flow but marks everything executed downstream of
that decision as uncertain.
"""

from __future__ import annotations

import random

from ..dsl.ast import (
    And, Chance, Check, Choice, Const, Expr, If, Let, Literal, Not, Or,
    Program, Stmt, StrExpr, Trigger, Var,
)
from ..errors import OracleUnavailable
from .seeds import segment_stream
from .types import (
    BranchTaken, ChanceDrawn, Checked, ChoiceMade, ConditionOracle, RunSeed,
    Scene, TraceEvent, Tri, Triggered, TriggeredStatement,
)

_NOT = {Tri.TRUE: Tri.FALSE, Tri.FALSE: Tri.TRUE, Tri.UNKNOWN: Tri.UNKNOWN}

Memo = dict[tuple[str, str], object]


def eval_expr(expr: Expr, scene: Scene, oracle: ConditionOracle,
              rng: random.Random, trace: list[TraceEvent] | None = None,
              segment_id: str = "", memo: Memo | None = None) -> Tri:
    if isinstance(expr, Const):
        return Tri.TRUE if expr.value else Tri.FALSE
    if isinstance(expr, Chance):
        draw = rng.random()
        passed = draw < expr.p
        if trace is not None:
            trace.append(ChanceDrawn(segment_id, expr.p, draw, passed))
        return Tri.TRUE if passed else Tri.FALSE
    if isinstance(expr, Check):
        return _check(expr.question, scene, oracle, trace, segment_id, memo)
    if isinstance(expr, Not):
        return _NOT[eval_expr(expr.operand, scene, oracle, rng, trace,
                              segment_id, memo)]
    if isinstance(expr, And):
        left = eval_expr(expr.left, scene, oracle, rng, trace,
                         segment_id, memo)
        if left is Tri.FALSE:
            return Tri.FALSE
        right = eval_expr(expr.right, scene, oracle, rng, trace,
                          segment_id, memo)
        if left is Tri.TRUE:
            return right
        return Tri.FALSE if right is Tri.FALSE else Tri.UNKNOWN
    if isinstance(expr, Or):
        left = eval_expr(expr.left, scene, oracle, rng, trace,
                         segment_id, memo)
        if left is Tri.TRUE:
            return Tri.TRUE
        right = eval_expr(expr.right, scene, oracle, rng, trace,
                          segment_id, memo)
        if left is Tri.FALSE:
            return right
        return Tri.TRUE if right is Tri.TRUE else Tri.UNKNOWN
    raise TypeError(f"not a condition: {expr!r}")


def _check(question: str, scene: Scene, oracle: ConditionOracle,
           trace: list[TraceEvent] | None, segment_id: str,
           memo: Memo | None) -> Tri:
    key = (scene.id, question)
    if memo is not None and key in memo:
        verdict = memo[key]
        if trace is not None:
            trace.append(Checked(segment_id, question, verdict.verdict,
                                 verdict.source, cached=True))
        return verdict.verdict
    verdict = oracle.check_condition(scene, question)
    if memo is not None:
        memo[key] = verdict
    if trace is not None:
        trace.append(Checked(segment_id, question, verdict.verdict,
                             verdict.source, cached=verdict.cached))
    return verdict.verdict


def execute_segment(
    program: Program, scene: Scene, oracle: ConditionOracle, seed: RunSeed,
    _memo: Memo | None = None,
) -> tuple[list[TriggeredStatement], list[TraceEvent]]:
    rng = segment_stream(seed, program.segment_id)
    memo: Memo = {} if _memo is None else _memo
    out: list[TriggeredStatement] = []
    trace: list[TraceEvent] = []
    state = _Exec(program.segment_id, scene, oracle, rng, memo, out, trace)
    try:
        state.run_block(program.body, {}, path=(), uncertain=False)
    except OracleUnavailable as err:
        if err.segment_id is None:
            err.segment_id = program.segment_id
        raise
    return out, trace


def execute_profile(
    programs: list[Program], scene: Scene, oracle: ConditionOracle,
    seed: RunSeed,
) -> tuple[list[TriggeredStatement], list[TraceEvent]]:
    ids = [p.segment_id for p in programs]
    if len(set(ids)) != len(ids):
        raise ValueError("segment ids must be distinct")
    memo: Memo = {}
    statements: list[TriggeredStatement] = []
    trace: list[TraceEvent] = []
    for program in programs:
        stmts, events = execute_segment(program, scene, oracle, seed,
                                        _memo=memo)
        statements.extend(stmts)
        trace.extend(events)
    return statements, trace


class _Exec:
    def __init__(self, segment_id: str, scene: Scene,
                 oracle: ConditionOracle, rng: random.Random, memo: Memo,
                 out: list[TriggeredStatement], trace: list[TraceEvent]):
        self.segment_id = segment_id
        self.scene = scene
        self.oracle = oracle
        self.rng = rng
        self.memo = memo
        self.out = out
        self.trace = trace

    def guard(self, expr: Expr) -> Tri:
        return eval_expr(expr, self.scene, self.oracle, self.rng, self.trace,
                         self.segment_id, self.memo)

    def run_block(self, stmts: tuple[Stmt, ...], env: dict[str, str],
                  path: tuple[int, ...], uncertain: bool) -> None:
        for stmt in stmts:
            if isinstance(stmt, Trigger):
                text = self.str_value(stmt.value, env)
                self.out.append(TriggeredStatement(
                    text, self.segment_id, path, uncertain))
                self.trace.append(Triggered(self.segment_id, text, uncertain))
            elif isinstance(stmt, Let):
                env[stmt.name] = self.str_value(stmt.value, env)
            elif isinstance(stmt, If):
                self.run_if(stmt, env, path, uncertain)
            else:
                raise TypeError(f"not a statement: {stmt!r}")

    def run_if(self, stmt: If, env: dict[str, str], path: tuple[int, ...],
               uncertain: bool) -> None:
        # arms: 0 = then, 1..n = elifs in order, n+1 = else
        arms: list[tuple[Expr | None, tuple[Stmt, ...] | None]] = [
            (stmt.guard, stmt.then),
            *stmt.elifs,
        ]
        crossed_unknown = False
        for arm_index, (guard, block) in enumerate(arms):
            verdict = self.guard(guard)
            if verdict is Tri.UNKNOWN:
                crossed_unknown = True
            if verdict is Tri.TRUE:
                kind = "then" if arm_index == 0 else "elif"
                self.trace.append(BranchTaken(self.segment_id, kind,
                                              arm_index))
                self.run_block(block, dict(env), path + (arm_index,),
                               uncertain or crossed_unknown)
                return
        if stmt.orelse is not None:
            arm_index = len(arms)
            self.trace.append(BranchTaken(self.segment_id, "else", arm_index))
            self.run_block(stmt.orelse, dict(env), path + (arm_index,),
                           uncertain or crossed_unknown)
            return
        self.trace.append(BranchTaken(self.segment_id, "skipped", None))

    def str_value(self, value: StrExpr, env: dict[str, str]) -> str:
        if isinstance(value, Literal):
            return value.text
        if isinstance(value, Var):
            return env[value.name]
        if isinstance(value, Choice):
            index = self.rng.randrange(len(value.options))
            self.trace.append(ChoiceMade(self.segment_id, value.options,
                                         index))
            return value.options[index]
        raise TypeError(f"not a string value: {value!r}")
