"""Expression tree for the logic DSL. Nodes are immutable and compare structurally."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from pbitq.models.values import DomainError, Evidence, PBit, TruthPair


@dataclass(frozen=True, slots=True)
class Atom:
    name: str


@dataclass(frozen=True, slots=True)
class CrispLit:
    value: PBit


@dataclass(frozen=True, slots=True)
class PairLit:
    value: TruthPair


@dataclass(frozen=True, slots=True)
class CountLit:
    value: Evidence


@dataclass(frozen=True, slots=True)
class Random:
    """random(ρ): True with probability ρ, else False."""

    rho: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.rho <= 1.0):
            raise DomainError(f"random(rho) requires rho in [0, 1], got {self.rho!r}")


@dataclass(frozen=True, slots=True)
class Not:
    operand: Expr


@dataclass(frozen=True, slots=True)
class And:
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Or:
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Implies:
    left: Expr
    right: Expr


Expr = Atom | CrispLit | PairLit | CountLit | Random | Not | And | Or | Implies


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Not):
        return (e.operand,)
    if isinstance(e, And | Or | Implies):
        return (e.left, e.right)
    return ()


def walk(e: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    yield e
    for child in children(e):
        yield from walk(child)


def free_atoms(e: Expr) -> frozenset[str]:
    return frozenset(node.name for node in walk(e) if isinstance(node, Atom))


def contains_random(e: Expr) -> bool:
    return any(isinstance(node, Random) for node in walk(e))
