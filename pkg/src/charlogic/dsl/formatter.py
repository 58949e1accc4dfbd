"""Canonical formatter: AST back to source text.

Output is stable (formatting a reparse of formatted output is a fixed
point) and minimal: parentheses appear only where precedence demands
them, indentation is four spaces per level, strings requote with the two
supported escapes.
"""

from __future__ import annotations

from .ast import (
    And, Chance, Check, Choice, Const, Expr, If, Let, Literal, Not, Or,
    Program, Stmt, StrExpr, Trigger, Var,
)

INDENT = "    "

# binding strength; higher binds tighter
_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_ATOM = 4


def format_program(program: Program) -> str:
    lines = ["when scene:"]
    _format_block(program.body, 1, lines)
    return "\n".join(lines) + "\n"


def _format_block(stmts: tuple[Stmt, ...], depth: int,
                  lines: list[str]) -> None:
    pad = INDENT * depth
    for stmt in stmts:
        if isinstance(stmt, Trigger):
            lines.append(f"{pad}trigger {_format_str(stmt.value)}")
        elif isinstance(stmt, Let):
            lines.append(f"{pad}let {stmt.name} = {_format_str(stmt.value)}")
        elif isinstance(stmt, If):
            lines.append(f"{pad}if {format_expr(stmt.guard)}:")
            _format_block(stmt.then, depth + 1, lines)
            for guard, block in stmt.elifs:
                lines.append(f"{pad}elif {format_expr(guard)}:")
                _format_block(block, depth + 1, lines)
            if stmt.orelse is not None:
                lines.append(f"{pad}else:")
                _format_block(stmt.orelse, depth + 1, lines)
        else:
            raise TypeError(f"not a statement: {stmt!r}")


def format_expr(expr: Expr, min_prec: int = _PREC_OR) -> str:
    # 'and'/'or' are left-associative: the right operand needs one more
    # level of binding strength to reparse into the same tree shape.
    if isinstance(expr, Or):
        text = (f"{format_expr(expr.left, _PREC_OR)} or "
                f"{format_expr(expr.right, _PREC_AND)}")
        prec = _PREC_OR
    elif isinstance(expr, And):
        text = (f"{format_expr(expr.left, _PREC_AND)} and "
                f"{format_expr(expr.right, _PREC_NOT)}")
        prec = _PREC_AND
    elif isinstance(expr, Not):
        text = f"not {format_expr(expr.operand, _PREC_NOT)}"
        prec = _PREC_NOT
    elif isinstance(expr, Check):
        text = f"check({quote(expr.question)})"
        prec = _PREC_ATOM
    elif isinstance(expr, Chance):
        text = f"chance({_format_number(expr.p)})"
        prec = _PREC_ATOM
    elif isinstance(expr, Const):
        text = "true" if expr.value else "false"
        prec = _PREC_ATOM
    else:
        raise TypeError(f"not a condition: {expr!r}")
    if prec < min_prec:
        return f"({text})"
    return text


def _format_str(value: StrExpr) -> str:
    if isinstance(value, Literal):
        return quote(value.text)
    if isinstance(value, Var):
        return value.name
    if isinstance(value, Choice):
        return "choice([" + ", ".join(quote(o) for o in value.options) + "])"
    raise TypeError(f"not a string value: {value!r}")


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _format_number(p: float) -> str:
    # integral probabilities print without a fraction: chance(1), chance(0)
    if p == int(p):
        return str(int(p))
    return repr(p)
