"""Frozen configuration models: t-norm families, σ configurations, noise models."""

from __future__ import annotations

import math
import sys

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pbitq.config import get_settings
from pbitq.models.enums import KernelKind, OpMap, ShiftMode, SigmaConvention, TNormKind


class TNormFamily(BaseModel):
    """Tagged conjunction quantifier. ``p`` is set iff kind is Schweizer–Sklar."""

    model_config = ConfigDict(frozen=True)

    kind: TNormKind
    p: float | None = None

    @model_validator(mode="after")
    def _validate_parameter(self) -> TNormFamily:
        if self.kind == TNormKind.schweizer_sklar:
            if self.p is None:
                raise ValueError("schweizer_sklar requires a parameter p")
            if not math.isfinite(self.p):
                raise ValueError("p must be finite; use min_max or drastic for the limits")
        elif self.p is not None:
            raise ValueError(f"{self.kind.value} takes no parameter")
        return self

    @classmethod
    def min_max(cls) -> TNormFamily:
        return cls(kind=TNormKind.min_max)

    @classmethod
    def product(cls) -> TNormFamily:
        return cls(kind=TNormKind.product)

    @classmethod
    def schweizer_sklar(cls, p: float) -> TNormFamily:
        return cls(kind=TNormKind.schweizer_sklar, p=p)

    @classmethod
    def drastic(cls) -> TNormFamily:
        return cls(kind=TNormKind.drastic)

    @property
    def label(self) -> str:
        if self.p is None:
            return self.kind.value
        return f"{self.kind.value}(p={self.p:g})"


# largest exponent whose exp is a finite double
_LOG_FLOAT_MAX = math.log(sys.float_info.max)


def _default_clamp() -> float:
    return get_settings().clamp_floor


class SigmaConfig(BaseModel):
    """σ-mapping configuration. The family must be additively generated with p < 0."""

    model_config = ConfigDict(frozen=True)

    family: TNormFamily
    convention: SigmaConvention = SigmaConvention.pure_generator
    op_map: OpMap = OpMap.printed
    clamp_floor: float = Field(default_factory=_default_clamp, gt=0.0, lt=0.5)

    @model_validator(mode="after")
    def _validate_family(self) -> SigmaConfig:
        kind = self.family.kind
        if kind in (TNormKind.min_max, TNormKind.drastic):
            raise ValueError(f"{kind.value} is not additively generated")
        if kind == TNormKind.schweizer_sklar and (self.family.p is None or self.family.p >= 0):
            raise ValueError("σ-mapping requires Schweizer–Sklar with p < 0")
        p = self.family.p
        if p is not None and p * math.log(self.clamp_floor) >= _LOG_FLOAT_MAX:
            limit = _LOG_FLOAT_MAX / math.log(self.clamp_floor)
            raise ValueError(
                f"σ generator overflows at the clamp floor {self.clamp_floor:g} for p={p:g}; "
                f"use p > {limit:.4g} or raise the clamp floor"
            )
        return self


class NoiseModel(BaseModel):
    """Per-observation evidential error and the kernel shifting the counts."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(ge=0.0, lt=1.0)
    shift_mode: ShiftMode = ShiftMode.common_shift
    kernel: KernelKind = KernelKind.binomial_symmetric
    bound: int = Field(default_factory=lambda: get_settings().ee_default_bound, ge=0)
