"""Canonical text form with minimal parentheses; ``parse(to_text(e)) == e``."""

from __future__ import annotations

from pbitq.dsl.ast import And, Atom, CountLit, CrispLit, Expr, Implies, Not, Or, PairLit, Random

# binding strength: higher binds tighter
_IMPLIES, _OR, _AND, _UNARY = 1, 2, 3, 4


def _number(value: float) -> str:
    return repr(float(value))


def _precedence(e: Expr) -> int:
    if isinstance(e, Implies):
        return _IMPLIES
    if isinstance(e, Or):
        return _OR
    if isinstance(e, And):
        return _AND
    return _UNARY


def _wrap(e: Expr, minimum: int) -> str:
    text = to_text(e)
    return f"({text})" if _precedence(e) < minimum else text


def to_text(e: Expr) -> str:
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, CrispLit):
        return e.value.symbol
    if isinstance(e, PairLit):
        return f"<{_number(e.value.w_plus)},{_number(e.value.w_minus)}>"
    if isinstance(e, CountLit):
        return f"{{{e.value.n_plus},{e.value.n_minus},{e.value.total}}}"
    if isinstance(e, Random):
        return f"random({_number(e.rho)})"
    if isinstance(e, Not):
        return f"~{_wrap(e.operand, _UNARY)}"
    if isinstance(e, And):
        # left-associative: a right operand of equal strength needs parentheses
        return f"{_wrap(e.left, _AND)} & {_wrap(e.right, _AND + 1)}"
    if isinstance(e, Or):
        return f"{_wrap(e.left, _OR)} | {_wrap(e.right, _OR + 1)}"
    return f"{_wrap(e.left, _IMPLIES + 1)} -> {_wrap(e.right, _IMPLIES)}"
