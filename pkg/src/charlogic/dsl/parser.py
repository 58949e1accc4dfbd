"""Recursive-descent parser for profile-logic programs.

parse() never raises on bad input: it returns either a Program or a
non-empty list of Diagnostics. Lexical, indentation and grammar errors
abort at the first failure; the free-variable pass runs on a clean parse
and reports every unbound identifier it finds.
"""

from __future__ import annotations

from .ast import (
    And, Chance, Check, Choice, Const, Diagnostic, Expr, If, Let, Literal,
    Not, Or, Program, Stmt, Trigger, Var,
)
from .lexer import LexError, Token, tokenize


class ParseError(Exception):
    def __init__(self, kind: str, message: str, pos: tuple[int, int]):
        super().__init__(message)
        self.kind = kind
        self.pos = pos


def parse(source: str, segment_id: str) -> Program | list[Diagnostic]:
    try:
        tokens = tokenize(source)
    except LexError as err:
        return [Diagnostic("error", err.kind, err.pos[0], err.pos[1], str(err))]
    try:
        body = _Parser(tokens).parse_program()
    except ParseError as err:
        return [Diagnostic("error", err.kind, err.pos[0], err.pos[1], str(err))]
    program = Program(segment_id, body, source_text=source)
    free = _free_variable_diagnostics(program)
    if free:
        return free
    return program


def _describe(tok: Token) -> str:
    if tok.kind == "STRING":
        return "string literal"
    if tok.kind == "NUMBER":
        return f"number {tok.value}"
    if tok.kind == "NEWLINE":
        return "end of line"
    if tok.kind == "EOF":
        return "end of input"
    if tok.kind in ("INDENT", "DEDENT"):
        return tok.kind.lower()
    return f"'{tok.value}'"


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "KW" and tok.value == word

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            wanted = what or {"NEWLINE": "end of line",
                              "INDENT": "an indented block",
                              "EOF": "end of input",
                              "IDENT": "an identifier",
                              "STRING": "a string literal",
                              "NUMBER": "a number"}.get(kind, f"'{kind}'")
            raise ParseError("grammar",
                             f"expected {wanted}, found {_describe(tok)}",
                             tok.pos)
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        tok = self.peek()
        if not self.at_kw(word):
            raise ParseError("grammar",
                             f"expected '{word}', found {_describe(tok)}",
                             tok.pos)
        return self.advance()

    # --- grammar productions ---

    def parse_program(self) -> tuple[Stmt, ...]:
        self.expect_kw("when")
        self.expect_kw("scene")
        self.expect(":")
        self.expect("NEWLINE")
        body = self.parse_block("when scene")
        self.expect("EOF", what="end of input")
        return body

    def parse_block(self, construct: str) -> tuple[Stmt, ...]:
        tok = self.peek()
        if tok.kind != "INDENT":
            raise ParseError("empty-block",
                             f"empty block in {construct}", tok.pos)
        self.advance()
        stmts = [self.parse_stmt()]
        while self.peek().kind != "DEDENT":
            stmts.append(self.parse_stmt())
        self.advance()
        return tuple(stmts)

    def parse_stmt(self) -> Stmt:
        tok = self.peek()
        if self.at_kw("trigger"):
            self.advance()
            value = self.parse_str_expr()
            self.expect("NEWLINE")
            return Trigger(value, pos=tok.pos)
        if self.at_kw("let"):
            self.advance()
            name = self.expect("IDENT", what="an identifier after 'let'")
            self.expect("=")
            value = self.parse_str_expr()
            self.expect("NEWLINE")
            return Let(name.value, value, pos=tok.pos)
        if self.at_kw("if"):
            return self.parse_if()
        raise ParseError("grammar",
                         f"expected a statement, found {_describe(tok)}",
                         tok.pos)

    def parse_if(self) -> If:
        start = self.expect_kw("if")
        guard = self.parse_expr()
        self.expect(":")
        self.expect("NEWLINE")
        then = self.parse_block("if")
        elifs: list[tuple[Expr, tuple[Stmt, ...]]] = []
        while self.at_kw("elif"):
            self.advance()
            g = self.parse_expr()
            self.expect(":")
            self.expect("NEWLINE")
            elifs.append((g, self.parse_block("elif")))
        orelse = None
        if self.at_kw("else"):
            self.advance()
            self.expect(":")
            self.expect("NEWLINE")
            orelse = self.parse_block("else")
        return If(guard, then, tuple(elifs), orelse, pos=start.pos)

    def parse_expr(self) -> Expr:
        left = self.parse_and()
        while self.at_kw("or"):
            op = self.advance()
            left = Or(left, self.parse_and(), pos=op.pos)
        return left

    def parse_and(self) -> Expr:
        left = self.parse_not()
        while self.at_kw("and"):
            op = self.advance()
            left = And(left, self.parse_not(), pos=op.pos)
        return left

    def parse_not(self) -> Expr:
        if self.at_kw("not"):
            tok = self.advance()
            return Not(self.parse_not(), pos=tok.pos)
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if self.at_kw("check"):
            self.advance()
            self.expect("(")
            q = self.expect("STRING", what="a question string in check(...)")
            self.expect(")")
            if not q.value or not q.value.endswith("?"):
                raise ParseError(
                    "grammar",
                    "check question must be a non-empty string ending in '?'",
                    q.pos)
            return Check(q.value, pos=tok.pos)
        if self.at_kw("chance"):
            self.advance()
            self.expect("(")
            num = self.expect("NUMBER", what="a probability in chance(...)")
            self.expect(")")
            p = float(num.value)
            if not 0.0 <= p <= 1.0:
                raise ParseError(
                    "grammar",
                    f"chance probability must be within [0, 1], got {num.value}",
                    num.pos)
            return Chance(p, pos=tok.pos)
        if self.at_kw("true") or self.at_kw("false"):
            self.advance()
            return Const(tok.value == "true", pos=tok.pos)
        if tok.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError("grammar",
                         f"expected a condition, found {_describe(tok)}",
                         tok.pos)

    def parse_str_expr(self):
        tok = self.peek()
        if tok.kind == "STRING":
            self.advance()
            if not tok.value:
                raise ParseError("grammar", "empty string literal", tok.pos)
            return Literal(tok.value, pos=tok.pos)
        if tok.kind == "IDENT":
            self.advance()
            return Var(tok.value, pos=tok.pos)
        if self.at_kw("choice"):
            self.advance()
            self.expect("(")
            self.expect("[")
            options = [self._option()]
            while self.peek().kind == ",":
                self.advance()
                options.append(self._option())
            self.expect("]")
            self.expect(")")
            if len(options) < 2:
                raise ParseError("grammar",
                                 "choice needs at least two options", tok.pos)
            if len(set(options)) < 2:
                raise ParseError(
                    "grammar",
                    "choice options must include at least two distinct strings",
                    tok.pos)
            return Choice(tuple(options), pos=tok.pos)
        raise ParseError("grammar",
                         f"expected a string value, found {_describe(tok)}",
                         tok.pos)

    def _option(self) -> str:
        tok = self.expect("STRING", what="an option string in choice([...])")
        if not tok.value:
            raise ParseError("grammar", "empty string literal", tok.pos)
        return tok.value


def _free_variable_diagnostics(program: Program) -> list[Diagnostic]:
    """Every Var must be bound by a let earlier in the same or an
    enclosing block. Bindings made inside a nested block do not escape."""
    diags: list[Diagnostic] = []

    def use(value, bound: set[str]) -> None:
        if isinstance(value, Var) and value.name not in bound:
            diags.append(Diagnostic(
                "error", "free-variable", value.pos[0], value.pos[1],
                f"unbound identifier {value.name}"))

    def walk(stmts: tuple[Stmt, ...], bound: set[str]) -> None:
        local = set(bound)
        for stmt in stmts:
            if isinstance(stmt, Trigger):
                use(stmt.value, local)
            elif isinstance(stmt, Let):
                use(stmt.value, local)
                local.add(stmt.name)
            else:
                walk(stmt.then, local)
                for _, block in stmt.elifs:
                    walk(block, local)
                if stmt.orelse is not None:
                    walk(stmt.orelse, local)

    walk(program.body, set())
    return diags
