"""Lexer for profile-logic source.

Line-oriented and indentation-aware: emits INDENT/DEDENT tokens from
leading-space changes, NEWLINE at the end of each code line, and skips
blank and comment-only lines entirely so they never affect nesting.
Strings are double-quoted with exactly two escapes, \\" and \\\\.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import Pos

KEYWORDS = frozenset({
    "when", "scene", "if", "elif", "else", "trigger", "let",
    "check", "chance", "choice", "true", "false", "and", "or", "not",
})

_PUNCT = frozenset(":()[],=")
_NUMBER_RE = re.compile(r"\d+(\.\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Token:
    kind: str  # NEWLINE INDENT DEDENT STRING NUMBER IDENT KW EOF, or a punct char
    value: str
    pos: Pos


class LexError(Exception):
    def __init__(self, kind: str, message: str, pos: Pos):
        super().__init__(message)
        self.kind = kind  # "lexical" | "indentation"
        self.pos = pos


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    lines = source.split("\n")
    for lineno, raw in enumerate(lines, 1):
        split = _split_indent(raw, lineno)
        if split is None:
            continue
        indent, body = split
        if indent > indents[-1]:
            indents.append(indent)
            tokens.append(Token("INDENT", "", (lineno, 1)))
        else:
            while indent < indents[-1]:
                indents.pop()
                tokens.append(Token("DEDENT", "", (lineno, 1)))
            if indent != indents[-1]:
                raise LexError("indentation",
                               "unindent does not match any outer level",
                               (lineno, indent + 1))
        _lex_line(body, lineno, indent, tokens)
        tokens.append(Token("NEWLINE", "", (lineno, indent + len(body) + 1)))
    endpos = (len(lines), 1)
    while indents[-1] > 0:
        indents.pop()
        tokens.append(Token("DEDENT", "", endpos))
    tokens.append(Token("EOF", "", endpos))
    return tokens


def _split_indent(raw: str, lineno: int) -> tuple[int, str] | None:
    """Return (indent_width, rest_of_line), or None for blank/comment lines."""
    i = 0
    while i < len(raw) and raw[i] in " \t":
        if raw[i] == "\t":
            raise LexError("indentation", "tab character in indentation",
                           (lineno, i + 1))
        i += 1
    rest = raw[i:].rstrip("\r")
    if not rest or rest.startswith("#"):
        return None
    return i, rest


def _lex_line(body: str, lineno: int, indent: int, out: list[Token]) -> None:
    i = 0
    n = len(body)
    while i < n:
        ch = body[i]
        col = indent + i + 1
        if ch == " ":
            i += 1
            continue
        if ch == "#":
            return
        if ch == '"':
            text, i = _lex_string(body, i, lineno, indent)
            out.append(Token("STRING", text, (lineno, col)))
            continue
        if ch.isdigit():
            m = _NUMBER_RE.match(body, i)
            out.append(Token("NUMBER", m.group(), (lineno, col)))
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _IDENT_RE.match(body, i)
            word = m.group()
            out.append(Token("KW" if word in KEYWORDS else "IDENT",
                             word, (lineno, col)))
            i = m.end()
            continue
        if ch in _PUNCT:
            out.append(Token(ch, ch, (lineno, col)))
            i += 1
            continue
        raise LexError("lexical", f"unexpected character {ch!r}", (lineno, col))
    return


def _lex_string(body: str, start: int, lineno: int,
                indent: int) -> tuple[str, int]:
    """Lex a string literal starting at body[start] == '"'.

    Returns (decoded_text, index_after_closing_quote).
    """
    i = start + 1
    chars: list[str] = []
    n = len(body)
    while i < n:
        ch = body[i]
        if ch == "\\":
            if i + 1 >= n:
                break
            esc = body[i + 1]
            if esc not in ('"', "\\"):
                raise LexError("lexical",
                               f"invalid escape sequence '\\{esc}'",
                               (lineno, indent + i + 1))
            chars.append(esc)
            i += 2
            continue
        if ch == '"':
            return "".join(chars), i + 1
        chars.append(ch)
        i += 1
    raise LexError("lexical", "unterminated string literal",
                   (lineno, indent + start + 1))
