"""Tokenizer for ASP-Core-2 source text.

Implements the language's lexical table exactly: longest match wins, and on
equal length a fixed lexeme (keyword or punctuation) beats an identifier
class, so `not` is NAF while `nota` is an ID. Comments and blanks are scanned
as trivia; `tokenize` drops them, `scan` keeps them so that the concatenation
of all lexemes reproduces the input byte for byte.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .errors import LexError
from .syntax import Span


class TokenKind(enum.Enum):
    ID = enum.auto()
    VARIABLE = enum.auto()
    STRING = enum.auto()
    NUMBER = enum.auto()
    ANONYMOUS_VARIABLE = enum.auto()
    DOT = enum.auto()
    COMMA = enum.auto()
    QUERY_MARK = enum.auto()
    COLON = enum.auto()
    SEMICOLON = enum.auto()
    OR = enum.auto()
    NAF = enum.auto()
    CONS = enum.auto()
    WCONS = enum.auto()
    PLUS = enum.auto()
    MINUS = enum.auto()
    TIMES = enum.auto()
    DIV = enum.auto()
    AT = enum.auto()
    PAREN_OPEN = enum.auto()
    PAREN_CLOSE = enum.auto()
    SQUARE_OPEN = enum.auto()
    SQUARE_CLOSE = enum.auto()
    CURLY_OPEN = enum.auto()
    CURLY_CLOSE = enum.auto()
    EQUAL = enum.auto()
    UNEQUAL = enum.auto()
    LESS = enum.auto()
    GREATER = enum.auto()
    LESS_OR_EQ = enum.auto()
    GREATER_OR_EQ = enum.auto()
    AGGREGATE_COUNT = enum.auto()
    AGGREGATE_MAX = enum.auto()
    AGGREGATE_MIN = enum.auto()
    AGGREGATE_SUM = enum.auto()
    COMMENT = enum.auto()
    MULTI_LINE_COMMENT = enum.auto()
    BLANK = enum.auto()
    EOF = enum.auto()


TRIVIA = frozenset({TokenKind.COMMENT, TokenKind.MULTI_LINE_COMMENT, TokenKind.BLANK})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span


# Character-class rules, matched with Python regexes at the current position.
_CLASS_RULES: tuple[tuple[TokenKind, re.Pattern[str]], ...] = (
    (TokenKind.ID, re.compile(r"[a-z][A-Za-z0-9_]*")),
    (TokenKind.VARIABLE, re.compile(r"[A-Z][A-Za-z0-9_]*")),
    (TokenKind.STRING, re.compile(r'"(?:[^\\"]|\\")*"')),
    (TokenKind.NUMBER, re.compile(r"0|[1-9][0-9]*")),
    # A line comment runs to the newline; one at end of input is accepted too.
    (TokenKind.COMMENT, re.compile(r"%(?:[^*\n][^\n]*)?(?:\n|\Z)")),
    (TokenKind.MULTI_LINE_COMMENT, re.compile(r"%\*(?:[^*]|\*[^%])*\*%")),
    (TokenKind.BLANK, re.compile(r"[ \t\n]+")),
)

# Fixed lexemes, longest first so a prefix never shadows a longer match.
_FIXED_RULES: tuple[tuple[TokenKind, str], ...] = tuple(
    sorted(
        [
            (TokenKind.ANONYMOUS_VARIABLE, "_"),
            (TokenKind.DOT, "."),
            (TokenKind.COMMA, ","),
            (TokenKind.QUERY_MARK, "?"),
            (TokenKind.COLON, ":"),
            (TokenKind.SEMICOLON, ";"),
            (TokenKind.OR, "|"),
            (TokenKind.NAF, "not"),
            (TokenKind.CONS, ":-"),
            (TokenKind.WCONS, ":~"),
            (TokenKind.PLUS, "+"),
            (TokenKind.MINUS, "-"),
            (TokenKind.TIMES, "*"),
            (TokenKind.DIV, "/"),
            (TokenKind.AT, "@"),
            (TokenKind.PAREN_OPEN, "("),
            (TokenKind.PAREN_CLOSE, ")"),
            (TokenKind.SQUARE_OPEN, "["),
            (TokenKind.SQUARE_CLOSE, "]"),
            (TokenKind.CURLY_OPEN, "{"),
            (TokenKind.CURLY_CLOSE, "}"),
            (TokenKind.EQUAL, "="),
            (TokenKind.UNEQUAL, "<>"),
            (TokenKind.UNEQUAL, "!="),
            (TokenKind.LESS, "<"),
            (TokenKind.GREATER, ">"),
            (TokenKind.LESS_OR_EQ, "<="),
            (TokenKind.GREATER_OR_EQ, ">="),
            (TokenKind.AGGREGATE_COUNT, "#count"),
            (TokenKind.AGGREGATE_MAX, "#max"),
            (TokenKind.AGGREGATE_MIN, "#min"),
            (TokenKind.AGGREGATE_SUM, "#sum"),
        ],
        key=lambda rule: -len(rule[1]),
    )
)


def _diagnose(text: str, pos: int) -> str:
    ch = text[pos]
    if ch == '"':
        return "unterminated or malformed string literal"
    if text.startswith("%*", pos):
        return "unterminated multi-line comment"
    return f"unexpected character {ch!r}"


def scan(text: str) -> list[Token]:
    """All lexemes including comment/blank trivia, in source order."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    column = 1
    n = len(text)
    while pos < n:
        best_kind: TokenKind | None = None
        best_len = 0
        for kind, pattern in _CLASS_RULES:
            m = pattern.match(text, pos)
            if m is not None and m.end() - pos > best_len:
                best_kind = kind
                best_len = m.end() - pos
        for kind, lexeme in _FIXED_RULES:
            if len(lexeme) >= best_len and text.startswith(lexeme, pos):
                best_kind = kind
                best_len = len(lexeme)
                break
        if best_kind is None:
            raise LexError(_diagnose(text, pos), Span(pos, 1, line, column))
        lexeme = text[pos : pos + best_len]
        tokens.append(Token(best_kind, lexeme, Span(pos, best_len, line, column)))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            column = best_len - lexeme.rfind("\n")
        else:
            column += best_len
        pos += best_len
    tokens.append(Token(TokenKind.EOF, "", Span(pos, 0, line, column)))
    return tokens


def tokenize(text: str) -> list[Token]:
    """Significant tokens only (trivia removed), ending with an EOF marker."""
    return [t for t in scan(text) if t.kind not in TRIVIA]
