"""Tokenizer and recursive-descent parser for the logic DSL.

Grammar::

    expr    := impl
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | primary
    primary := "(" expr ")" | "T" | "F" | "B" | "N"
             | "<" num "," num ">" | "{" int "," int "," int "}"
             | "random" "(" num ")" | ident
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass

from pbitq.dsl.ast import And, Atom, CountLit, CrispLit, Expr, Implies, Not, Or, PairLit, Random
from pbitq.models.values import DomainError, Evidence, PBit, TruthPair

IDENTIFIER = "identifier"
NUMBER = "number"
INTEGER = "integer"
END = "end of input"

CRISP_KEYWORDS = frozenset(PBit.SYMBOLS.values())
RESERVED = CRISP_KEYWORDS | {"random"}

PRIMARY_START = frozenset({"(", "~", "<", "{", "random", IDENTIFIER, *CRISP_KEYWORDS})
_CONTINUATION = frozenset({"&", "|", "->"})

_TOKEN_RE = re.compile(
    r"""
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<arrow>->)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()<>{},~&|])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    """Syntax error at a 1-based ``line``/``column`` with the set of acceptable tokens."""

    def __init__(self, message: str, *, line: int, column: int, expected: Iterable[str]) -> None:
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # identifier | number | end of input | the punctuation text itself
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return END if self.kind == END else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}",
                line=line,
                column=column,
                expected=(),
            )
        group = match.lastgroup
        value = match.group()
        if group == "newline":
            line += 1
            line_start = match.end()
        elif group == "number":
            tokens.append(Token(NUMBER, value, line, column))
        elif group == "ident":
            tokens.append(Token(IDENTIFIER, value, line, column))
        elif group in ("arrow", "punct"):
            tokens.append(Token(value, value, line, column))
        pos = match.end()
    tokens.append(Token(END, "", line, len(text) - line_start + 1))
    return tokens


class Parser:
    """Single-use parser over a token list."""

    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.current
        if token.kind != END:
            self.pos += 1
        return token

    def error(self, expected: Iterable[str], token: Token | None = None) -> ParseError:
        tok = token or self.current
        return ParseError(
            f"unexpected {tok.describe()}",
            line=tok.line,
            column=tok.column,
            expected=expected,
        )

    def match(self, kind: str, *, also: Iterable[str] = ()) -> Token:
        if self.current.kind != kind:
            raise self.error({kind, *also})
        return self.advance()

    def is_keyword(self, word: str) -> bool:
        return self.current.kind == IDENTIFIER and self.current.text == word

    # ── grammar ──────────────────────────────────────────────────────────────

    def parse(self) -> Expr:
        expr = self.implication()
        if self.current.kind != END:
            raise self.error(_CONTINUATION | {END})
        return expr

    def implication(self) -> Expr:
        left = self.disjunction()
        if self.current.kind == "->":
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Expr:
        expr = self.conjunction()
        while self.current.kind == "|":
            self.advance()
            expr = Or(expr, self.conjunction())
        return expr

    def conjunction(self) -> Expr:
        expr = self.unary()
        while self.current.kind == "&":
            self.advance()
            expr = And(expr, self.unary())
        return expr

    def unary(self) -> Expr:
        if self.current.kind == "~":
            self.advance()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Expr:
        token = self.current
        if token.kind == "(":
            self.advance()
            inner = self.implication()
            self.match(")", also=_CONTINUATION)
            return inner
        if token.kind == "<":
            return self.pair_literal()
        if token.kind == "{":
            return self.count_literal()
        if token.kind == IDENTIFIER:
            if token.text in CRISP_KEYWORDS:
                self.advance()
                return CrispLit(PBit.from_symbol(token.text))
            if token.text == "random":
                return self.random_literal()
            self.advance()
            return Atom(token.text)
        raise self.error(PRIMARY_START)

    # ── literals ─────────────────────────────────────────────────────────────

    def number(self) -> float:
        return float(self.match(NUMBER).text)

    def integer(self) -> int:
        token = self.current
        if token.kind != NUMBER or not token.text.isdigit():
            raise self.error({INTEGER})
        self.advance()
        return int(token.text)

    def pair_literal(self) -> PairLit:
        start = self.advance()
        w_plus = self.number()
        self.match(",")
        w_minus = self.number()
        self.match(">")
        try:
            return PairLit(TruthPair(w_plus, w_minus))
        except DomainError as exc:
            raise ParseError(
                f"invalid truth pair: {exc}",
                line=start.line,
                column=start.column,
                expected={"number in [0, 1]"},
            ) from exc

    def count_literal(self) -> CountLit:
        start = self.advance()
        n_plus = self.integer()
        self.match(",")
        n_minus = self.integer()
        self.match(",")
        total = self.integer()
        self.match("}")
        try:
            return CountLit(Evidence(n_plus, n_minus, total))
        except DomainError as exc:
            raise ParseError(
                f"invalid evidence counts: {exc}",
                line=start.line,
                column=start.column,
                expected={"counts with 0 <= n <= total, total >= 1"},
            ) from exc

    def random_literal(self) -> Random:
        start = self.advance()
        self.match("(")
        rho = self.number()
        self.match(")")
        try:
            return Random(rho)
        except DomainError as exc:
            raise ParseError(
                f"invalid random probability: {exc}",
                line=start.line,
                column=start.column,
                expected={"number in [0, 1]"},
            ) from exc


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises ParseError on malformed input."""
    return Parser(tokenize(text)).parse()
