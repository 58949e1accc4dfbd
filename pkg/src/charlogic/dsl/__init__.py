"""The profile-logic DSL: AST, lexer, parser, formatter, analysis."""

from .ast import (
    And,
    Chance,
    Check,
    Choice,
    Const,
    Diagnostic,
    Expr,
    If,
    Let,
    Literal,
    Not,
    Or,
    Program,
    Stmt,
    StrExpr,
    Trigger,
    Var,
)
from .analysis import Metrics, metrics, validate
from .formatter import format_program
from .parser import parse

__all__ = [
    "And", "Chance", "Check", "Choice", "Const", "Diagnostic", "Expr",
    "If", "Let", "Literal", "Metrics", "Not", "Or", "Program", "Stmt",
    "StrExpr", "Trigger", "Var",
    "format_program", "metrics", "parse", "validate",
]
