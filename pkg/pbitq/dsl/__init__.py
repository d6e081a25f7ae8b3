"""Logic-expression language: AST, parser, printer and evaluators."""

from pbitq.dsl.ast import And, Atom, CountLit, CrispLit, Expr, Implies, Not, Or, PairLit, Random
from pbitq.dsl.parser import ParseError, parse
from pbitq.dsl.printer import to_text

__all__ = [
    "And",
    "Atom",
    "CountLit",
    "CrispLit",
    "Expr",
    "Implies",
    "Not",
    "Or",
    "PairLit",
    "ParseError",
    "Random",
    "parse",
    "to_text",
]
