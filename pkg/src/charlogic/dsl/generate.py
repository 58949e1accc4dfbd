"""Random program generator.

Used by the golden-corpus builder and fuzz tests. Programs are always
well-formed: non-empty blocks, bound variables, questions ending in '?',
probabilities inside [0, 1]. Shape is steered by a statement budget and
an if-nesting cap so output stays small and readable.
"""

from __future__ import annotations

import random

from .ast import (
    And, Chance, Check, Choice, Const, Expr, If, Let, Literal, Not, Or,
    Program, Stmt, StrExpr, Trigger, Var,
)
from .formatter import format_program

_WORDS = (
    "ally", "blade", "calm", "danger", "echo", "fury", "grin", "honor",
    "island", "jest", "kin", "loyal", "mirror", "night", "oath", "pride",
    "quiet", "rage", "storm", "truth",
)
_VAR_NAMES = ("mood", "style", "stance", "tone", "line")


class _Gen:
    def __init__(self, rng: random.Random, max_depth: int, max_stmts: int,
                 allow_random: bool):
        self.rng = rng
        self.max_depth = min(max_depth, 5)
        self.budget = min(max_stmts, 30)
        self.allow_random = allow_random

    def phrase(self, lo: int = 2, hi: int = 5) -> str:
        rng = self.rng
        text = " ".join(rng.choice(_WORDS) for _ in range(rng.randint(lo, hi)))
        # sprinkle in the characters that need escaping
        if rng.random() < 0.12:
            text += f' "{rng.choice(_WORDS)}"'
        if rng.random() < 0.08:
            text += " \\" + rng.choice(_WORDS)
        return text

    def question(self) -> str:
        return f"Is the {self.phrase(1, 3)}?"

    def expr(self, depth: int) -> Expr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.5:
            return self.atom()
        roll = rng.random()
        if roll < 0.25:
            return Not(self.expr(depth - 1))
        ctor = And if roll < 0.65 else Or
        return ctor(self.expr(depth - 1), self.expr(depth - 1))

    def atom(self) -> Expr:
        roll = self.rng.random()
        if self.allow_random and roll < 0.18:
            return Chance(round(self.rng.uniform(0.05, 0.95), 2))
        if roll < 0.92:
            return Check(self.question())
        return Const(self.rng.random() < 0.5)

    def str_expr(self, bound: tuple[str, ...]) -> StrExpr:
        rng = self.rng
        roll = rng.random()
        if bound and roll < 0.2:
            return Var(rng.choice(bound))
        if self.allow_random and roll < 0.38:
            count = rng.randint(2, 4)
            options = []
            while len(set(options)) < count:
                options = [self.phrase(1, 3) for _ in range(count)]
            return Choice(tuple(options))
        return Literal(self.phrase())

    def block(self, depth_left: int, bound: tuple[str, ...],
              min_stmts: int = 1) -> tuple[Stmt, ...]:
        rng = self.rng
        stmts: list[Stmt] = []
        local = list(bound)
        count = rng.randint(min_stmts, max(min_stmts, 2))
        for _ in range(count):
            if self.budget <= 0:
                break
            stmts.append(self.stmt(depth_left, tuple(local)))
            last = stmts[-1]
            if isinstance(last, Let):
                local.append(last.name)
        if not stmts:
            self.budget -= 1
            stmts.append(Trigger(Literal(self.phrase())))
        return tuple(stmts)

    def stmt(self, depth_left: int, bound: tuple[str, ...]) -> Stmt:
        rng = self.rng
        self.budget -= 1
        roll = rng.random()
        if depth_left > 0 and self.budget > 2 and roll < 0.5:
            guard = self.expr(2)
            then = self.block(depth_left - 1, bound)
            elifs = tuple(
                (self.expr(1), self.block(depth_left - 1, bound))
                for _ in range(rng.randint(0, 2))
                if self.budget > 1
            )
            orelse = (self.block(depth_left - 1, bound)
                      if self.budget > 1 and rng.random() < 0.5 else None)
            return If(guard, then, elifs, orelse)
        if roll < 0.85 or not _VAR_NAMES:
            return Trigger(self.str_expr(bound))
        name = rng.choice(_VAR_NAMES)
        return Let(name, self.str_expr(bound))


def random_program(rng: random.Random, segment_id: str = "gen", *,
                   max_depth: int = 4, max_stmts: int = 12,
                   allow_random: bool = True) -> Program:
    gen = _Gen(rng, max_depth, max_stmts, allow_random)
    body = gen.block(gen.max_depth, (), min_stmts=2)
    program = Program(segment_id, body)
    return Program(segment_id, body, source_text=format_program(program))
