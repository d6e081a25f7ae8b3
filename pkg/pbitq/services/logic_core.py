"""Crisp CD logic on p-bits, evidence aggregation, and fuzzy pair operators."""

from __future__ import annotations

from collections.abc import Callable, Sequence

from pbitq.models.enums import CrispOp, ImplVariant
from pbitq.models.values import ALL_PBITS, Evidence, PBit, TruthPair
from pbitq.schemas.families import TNormFamily
from pbitq.services import tnorm_engine


class NonCrispValue(ValueError):
    """Raised when a crisp operation receives a non-p-bit or a fractional pair."""


def _require_pbit(value: object, name: str) -> PBit:
    if not isinstance(value, PBit):
        raise NonCrispValue(f"{name}: expected PBit, got {type(value).__name__}")
    return value


# ── crisp ───────────────────────────────────────────────────────────────────


def cd_meet(a: PBit, b: PBit) -> PBit:
    a, b = _require_pbit(a, "a"), _require_pbit(b, "b")
    return PBit(a.t & b.t, a.f | b.f)


def cd_join(a: PBit, b: PBit) -> PBit:
    a, b = _require_pbit(a, "a"), _require_pbit(b, "b")
    return PBit(a.t | b.t, a.f & b.f)


def cd_neg(a: PBit) -> PBit:
    a = _require_pbit(a, "a")
    return PBit(a.f, a.t)


def cd_impl(a: PBit, b: PBit, variant: ImplVariant = ImplVariant.printed) -> PBit:
    a, b = _require_pbit(a, "a"), _require_pbit(b, "b")
    first = (1 - a.t) | b.t
    second = a.f & b.f if variant == ImplVariant.printed else a.t & b.f
    return PBit(first, second)


# ── evidence ────────────────────────────────────────────────────────────────


def aggregate(observations: Sequence[PBit]) -> Evidence:
    """Count positive (t=1) and negative (f=1) observations; Both counts for each."""
    if not observations:
        raise ValueError("aggregate requires at least one observation")
    bits = [_require_pbit(obs, f"observations[{idx}]") for idx, obs in enumerate(observations)]
    return Evidence(
        n_plus=sum(bit.t for bit in bits),
        n_minus=sum(bit.f for bit in bits),
        total=len(bits),
    )


def normalize(e: Evidence) -> TruthPair:
    return TruthPair(e.n_plus / e.total, e.n_minus / e.total)


def embed_crisp(a: PBit) -> TruthPair:
    a = _require_pbit(a, "a")
    return TruthPair(float(a.t), float(a.f))


def to_crisp(pair: TruthPair) -> PBit:
    """Exact inverse of ``embed_crisp``; fractional components are rejected, not rounded."""
    coords = (pair.w_plus, pair.w_minus)
    if any(value not in (0.0, 1.0) for value in coords):
        raise NonCrispValue(f"pair ({pair.w_plus}, {pair.w_minus}) is not crisp")
    return PBit(int(pair.w_plus), int(pair.w_minus))


# ── fuzzy ───────────────────────────────────────────────────────────────────


def fuzzy_meet(a: TruthPair, b: TruthPair, fam: TNormFamily) -> TruthPair:
    return TruthPair(
        tnorm_engine.tnorm(fam, a.w_plus, b.w_plus),
        tnorm_engine.conorm(fam, a.w_minus, b.w_minus),
    )


def fuzzy_join(a: TruthPair, b: TruthPair, fam: TNormFamily) -> TruthPair:
    return TruthPair(
        tnorm_engine.conorm(fam, a.w_plus, b.w_plus),
        tnorm_engine.tnorm(fam, a.w_minus, b.w_minus),
    )


def fuzzy_neg(a: TruthPair) -> TruthPair:
    return TruthPair(a.w_minus, a.w_plus)


def coord_neg(a: TruthPair) -> TruthPair:
    """Coordinatewise complement; not the CD negation (differs on Both / Neither)."""
    return TruthPair(1.0 - a.w_plus, 1.0 - a.w_minus)


def fuzzy_impl(
    a: TruthPair,
    b: TruthPair,
    fam: TNormFamily,
    variant: ImplVariant = ImplVariant.printed,
) -> TruthPair:
    first = tnorm_engine.residuum(fam, a.w_plus, b.w_plus)
    if variant == ImplVariant.printed:
        second = tnorm_engine.tnorm(fam, a.w_minus, b.w_minus)
    else:
        second = tnorm_engine.tnorm(fam, a.w_plus, b.w_minus)
    return TruthPair(first, second)


def truth_table(
    op: CrispOp,
    variant: ImplVariant = ImplVariant.printed,
) -> list[tuple[PBit, PBit | None, PBit]]:
    """Exhaustive table over ALL_PBITS: 16 rows for binary operators, 4 for negation."""
    if op == CrispOp.neg:
        return [(a, None, cd_neg(a)) for a in ALL_PBITS]
    binary: Callable[[PBit, PBit], PBit] = {
        CrispOp.meet: cd_meet,
        CrispOp.join: cd_join,
        CrispOp.impl: lambda a, b: cd_impl(a, b, variant),
    }[op]
    return [(a, b, binary(a, b)) for a in ALL_PBITS for b in ALL_PBITS]
