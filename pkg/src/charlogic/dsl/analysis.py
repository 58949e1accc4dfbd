"""Static analysis over parsed programs: shape metrics and style lints."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .ast import (
    And, Chance, Check, Choice, Const, Diagnostic, Expr, If, Let, Not, Or,
    Program, Stmt, Trigger,
)


@dataclass(frozen=True)
class Metrics:
    if_depth: int       # deepest nesting of If statements, 0 when none
    has_branch: bool    # true iff any If carries an elif or else arm
    has_random: bool    # true iff any chance(...) or choice([...]) appears
    check_count: int    # number of check(...) atoms


def metrics(program: Program) -> Metrics:
    return Metrics(
        if_depth=_depth(program.body),
        has_branch=any(isinstance(s, If) and (s.elifs or s.orelse is not None)
                       for s in _all_stmts(program.body)),
        has_random=any(isinstance(e, Chance) for e in _all_exprs(program.body))
        or any(isinstance(s, (Trigger, Let))
               and isinstance(s.value, Choice)
               for s in _all_stmts(program.body)),
        check_count=sum(isinstance(e, Check)
                        for e in _all_exprs(program.body)),
    )


def _depth(stmts: tuple[Stmt, ...]) -> int:
    deepest = 0
    for stmt in stmts:
        if isinstance(stmt, If):
            inner = _depth(stmt.then)
            for _, block in stmt.elifs:
                inner = max(inner, _depth(block))
            if stmt.orelse is not None:
                inner = max(inner, _depth(stmt.orelse))
            deepest = max(deepest, 1 + inner)
    return deepest


def _all_stmts(stmts: tuple[Stmt, ...]) -> Iterator[Stmt]:
    for stmt in stmts:
        yield stmt
        if isinstance(stmt, If):
            yield from _all_stmts(stmt.then)
            for _, block in stmt.elifs:
                yield from _all_stmts(block)
            if stmt.orelse is not None:
                yield from _all_stmts(stmt.orelse)


def _all_exprs(stmts: tuple[Stmt, ...]) -> Iterator[Expr]:
    for stmt in _all_stmts(stmts):
        if isinstance(stmt, If):
            for guard in (stmt.guard, *(g for g, _ in stmt.elifs)):
                yield from _walk_expr(guard)


def _walk_expr(expr: Expr) -> Iterator[Expr]:
    yield expr
    if isinstance(expr, Not):
        yield from _walk_expr(expr.operand)
    elif isinstance(expr, (And, Or)):
        yield from _walk_expr(expr.left)
        yield from _walk_expr(expr.right)


def validate(program: Program) -> list[Diagnostic]:
    """Style lints on a well-formed program. Warnings only; a clean parse
    already guarantees the hard invariants."""
    warnings: list[Diagnostic] = []
    seen: dict[str, Expr] = {}
    for expr in _all_exprs(program.body):
        if isinstance(expr, Check):
            if expr.question in seen:
                warnings.append(_warn(
                    expr.pos, f"duplicate question {expr.question!r}"))
            else:
                seen[expr.question] = expr
        elif isinstance(expr, Chance) and expr.p in (0.0, 1.0):
            warnings.append(_warn(
                expr.pos,
                f"chance({int(expr.p)}) never varies; use true/false"))
    for stmt in _all_stmts(program.body):
        if isinstance(stmt, If):
            if (isinstance(stmt.guard, Const) and stmt.guard.value
                    and stmt.orelse is not None):
                warnings.append(_warn(stmt.pos,
                                      "else arm unreachable after 'if true'"))
        elif isinstance(stmt.value, Choice):
            opts = stmt.value.options
            if len(set(opts)) < len(opts):
                warnings.append(_warn(stmt.value.pos,
                                      "choice options contain duplicates"))
    return warnings


def _warn(pos: tuple[int, int], message: str) -> Diagnostic:
    return Diagnostic("warning", "style", pos[0], pos[1], message)
