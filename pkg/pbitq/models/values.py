"""Immutable value types: crisp p-bits, fuzzy truth pairs, evidence counts, amplitudes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar


class DomainError(ValueError):
    """Raised when a value lies outside the mathematical domain of an operation."""


@dataclass(frozen=True, slots=True)
class PBit:
    """Crisp CD truth value: True=(1,0), False=(0,1), Both=(1,1), Neither=(0,0)."""

    t: int
    f: int

    SYMBOLS: ClassVar[dict[tuple[int, int], str]] = {
        (1, 0): "T",
        (0, 1): "F",
        (1, 1): "B",
        (0, 0): "N",
    }

    def __post_init__(self) -> None:
        if self.t not in (0, 1) or self.f not in (0, 1):
            raise DomainError(f"p-bit coordinates must be 0 or 1, got ({self.t}, {self.f})")

    @property
    def symbol(self) -> str:
        return self.SYMBOLS[(self.t, self.f)]

    @classmethod
    def from_symbol(cls, symbol: str) -> PBit:
        for coords, name in cls.SYMBOLS.items():
            if name == symbol:
                return cls(*coords)
        raise DomainError(f"unknown p-bit symbol {symbol!r}")


TRUE = PBit(1, 0)
FALSE = PBit(0, 1)
BOTH = PBit(1, 1)
NEITHER = PBit(0, 0)
ALL_PBITS: tuple[PBit, ...] = (TRUE, FALSE, BOTH, NEITHER)


@dataclass(frozen=True, slots=True)
class TruthPair:
    """Normalised positive/negative evidence weights (w⁺, w⁻) ∈ [0,1]²."""

    w_plus: float
    w_minus: float

    def __post_init__(self) -> None:
        for name, value in (("w_plus", self.w_plus), ("w_minus", self.w_minus)):
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True, slots=True)
class Evidence:
    """Counts of micro-situations with positive / negative evidence out of ``total``."""

    n_plus: int
    n_minus: int
    total: int

    def __post_init__(self) -> None:
        if self.total < 1:
            raise DomainError(f"total must be >= 1, got {self.total}")
        if not (0 <= self.n_plus <= self.total and 0 <= self.n_minus <= self.total):
            raise DomainError(
                f"counts must lie in [0, {self.total}], got ({self.n_plus}, {self.n_minus})"
            )


@dataclass(frozen=True, slots=True)
class Amplitude:
    """Ordered real pair read as the complex number re + i·im."""

    re: float
    im: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"amplitude components must be finite, got ({self.re}, {self.im})")

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex) -> Amplitude:
        return cls(z.real, z.imag)
