"""AST node types for profile-logic programs.

All nodes are frozen dataclasses. Child sequences are tuples so nodes are
hashable and comparable by value. Source positions are carried for
diagnostics but excluded from equality: two parses of the same text (or a
parse of formatted output) compare equal structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Pos = tuple[int, int]  # 1-based (line, column)

_NOPOS: Pos = (0, 0)


# --- boolean expressions (guards) ---

@dataclass(frozen=True)
class Check:
    """check("...?") - ask the condition oracle a yes/no question."""
    question: str
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Chance:
    """chance(p) - true with probability p on the segment's random stream."""
    p: float
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Const:
    value: bool
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Not:
    operand: Expr
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class And:
    left: Expr
    right: Expr
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Or:
    left: Expr
    right: Expr
    pos: Pos = field(default=_NOPOS, compare=False)


Expr = Check | Chance | Const | Not | And | Or


# --- string expressions (statement payloads) ---

@dataclass(frozen=True)
class Literal:
    text: str
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Choice:
    """choice([...]) - pick one option uniformly on the segment's stream."""
    options: tuple[str, ...]
    pos: Pos = field(default=_NOPOS, compare=False)


StrExpr = Literal | Var | Choice


# --- statements ---

@dataclass(frozen=True)
class Trigger:
    value: StrExpr
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    value: StrExpr
    pos: Pos = field(default=_NOPOS, compare=False)


@dataclass(frozen=True)
class If:
    guard: Expr
    then: tuple[Stmt, ...]
    elifs: tuple[tuple[Expr, tuple[Stmt, ...]], ...] = ()
    orelse: tuple[Stmt, ...] | None = None
    pos: Pos = field(default=_NOPOS, compare=False)


Stmt = Trigger | Let | If


@dataclass(frozen=True)
class Program:
    """One compiled profile segment."""
    segment_id: str
    body: tuple[Stmt, ...]
    source_text: str = field(default="", compare=False)


# --- diagnostics ---

KINDS = ("lexical", "indentation", "grammar", "free-variable", "empty-block")


@dataclass(frozen=True)
class Diagnostic:
    severity: str           # "error" | "warning"
    kind: str               # one of KINDS for errors; warnings use "style"
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"
