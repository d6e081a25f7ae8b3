"""Schema for environment files.

An environment file is a JSON object mapping atom names to bindings::

    {"a": {"pair": [0.7, 0.2]}, "b": {"counts": [8, 1, 10]}, "c": "B"}

Validation goes through pydantic; failures surface as ``EnvironmentFileError`` with
the offending key path in the message.
"""

from __future__ import annotations

from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Field,
    StrictInt,
    TypeAdapter,
    ValidationError,
    model_validator,
)

from pbitq.dsl.evaluator import Binding
from pbitq.dsl.parser import RESERVED
from pbitq.models.values import Evidence, PBit, TruthPair

UnitWeight = Annotated[float, Field(strict=True, ge=0.0, le=1.0)]


class EnvironmentFileError(ValueError):
    """Raised when an environment payload does not match the binding schema."""


def _check_atom_name(name: str) -> str:
    if name in RESERVED or not name.isidentifier():
        raise ValueError(f"{name!r} is not a bindable atom name")
    return name


AtomName = Annotated[str, AfterValidator(_check_atom_name)]


class BindingSpec(BaseModel):
    """One binding: a p-bit symbol, a truth pair, or evidence counts."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    symbol: Literal["T", "F", "B", "N"] | None = None
    pair: tuple[UnitWeight, UnitWeight] | None = None
    counts: tuple[StrictInt, StrictInt, StrictInt] | None = None

    @model_validator(mode="before")
    @classmethod
    def _expand_symbol(cls, data: Any) -> Any:
        return {"symbol": data} if isinstance(data, str) else data

    @model_validator(mode="after")
    def _exactly_one(self) -> BindingSpec:
        given = [kind for kind in ("symbol", "pair", "counts") if getattr(self, kind) is not None]
        if len(given) != 1:
            raise ValueError("expected exactly one of 'pair' or 'counts'")
        return self

    def to_binding(self) -> Binding:
        if self.symbol is not None:
            return PBit.from_symbol(self.symbol)
        if self.pair is not None:
            return TruthPair(*self.pair)
        assert self.counts is not None
        return Evidence(*self.counts)


_ENVIRONMENT: TypeAdapter[dict[str, Binding]] = TypeAdapter(
    dict[AtomName, Annotated[BindingSpec, AfterValidator(BindingSpec.to_binding)]]
)


def _describe(exc: ValidationError, context: str) -> str:
    problems = []
    for error in exc.errors(include_url=False):
        path = ".".join(str(part) for part in (context, *error["loc"]))
        problems.append(f"{path}: {error['msg']}")
    return "; ".join(problems)


def parse_environment(payload: Any, *, context: str = "env") -> dict[str, Binding]:
    try:
        return _ENVIRONMENT.validate_python(payload)
    except ValidationError as exc:
        raise EnvironmentFileError(_describe(exc, context)) from exc


def load_environment(path: Path) -> dict[str, Binding]:
    """Read and validate an environment file; I/O and JSON failures become EnvironmentFileError."""
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise EnvironmentFileError(f"cannot read environment file {path}: {exc}") from exc
    try:
        return _ENVIRONMENT.validate_json(raw)
    except ValidationError as exc:
        raise EnvironmentFileError(_describe(exc, path.name)) from exc
