"""Parametric t-norm / t-conorm families, additive generators and distributivity defects.

Every kernel is vectorised over numpy arrays; the scalar entry points validate their
inputs and delegate to the array form.
"""

from __future__ import annotations

import time
from collections.abc import Iterable
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd

from pbitq.config import get_settings
from pbitq.log import log_timing
from pbitq.models.enums import DefectMetric, TNormKind
from pbitq.models.values import DomainError
from pbitq.schemas.families import TNormFamily
from pbitq.schemas.reports import DEFECT_CSV_COLUMNS, DefectReport

FloatArray = npt.NDArray[np.float64]
ArrayLike = npt.ArrayLike


class NotAdditivelyGenerated(ValueError):
    """Raised for families with no additive generator (min/max, drastic)."""


class UnsupportedOperation(ValueError):
    """Raised when a family does not support the requested operation."""


def _unit_array(value: ArrayLike, name: str) -> FloatArray:
    arr = np.asarray(value, dtype=np.float64)
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def _ss_parameter(fam: TNormFamily) -> float:
    assert fam.p is not None
    return fam.p


# ── t-norms ─────────────────────────────────────────────────────────────────


_SPLIT_AT = 700.0


def _log1p_scaled(c: FloatArray, m: FloatArray, sign: float) -> FloatArray:
    """log1p(sign * e^-c (e^m - 1)) for 0 <= m <= c, finite however large c gets."""
    # e^-c leaves the normal range near c = 708; past that the split form is exact
    scaled = np.exp(-c) * np.expm1(np.minimum(m, _SPLIT_AT))
    split = np.exp(m - c) - np.exp(-c)
    return np.log1p(sign * np.where(c < _SPLIT_AT, scaled, split))


def _ss_negative(p: float, x: FloatArray, y: FloatArray) -> FloatArray:
    # x^p + y^p - 1 = e^c (1 + e^-c (e^m - 1)) with a = p ln x, b = p ln y, c = max, m = min
    x, y = np.broadcast_arrays(x, y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        a = p * np.log(x)
        b = p * np.log(y)
        c = np.maximum(a, b)
        m = np.minimum(a, b)
        value = np.exp((c + _log1p_scaled(c, m, 1.0)) / p)
    value = np.minimum(value, np.minimum(x, y))
    out = np.where((x == 0.0) | (y == 0.0), 0.0, value)
    out = np.where(x == 1.0, y, out)
    return np.where(y == 1.0, x, out)


def _ss_positive(p: float, x: FloatArray, y: FloatArray) -> FloatArray:
    base = np.maximum(0.0, np.power(x, p) + np.power(y, p) - 1.0)
    out = np.minimum(np.power(base, 1.0 / p), np.minimum(x, y))
    out = np.where(x == 1.0, y, out)
    return np.where(y == 1.0, x, out)


def _tnorm_kernel(fam: TNormFamily, x: FloatArray, y: FloatArray) -> FloatArray:
    if fam.kind == TNormKind.min_max:
        return np.minimum(x, y)
    if fam.kind == TNormKind.product:
        return x * y
    if fam.kind == TNormKind.drastic:
        return np.where(x == 1.0, y, np.where(y == 1.0, x, 0.0))
    p = _ss_parameter(fam)
    if p == 0.0:
        return x * y
    if p < 0.0:
        return _ss_negative(p, x, y)
    return _ss_positive(p, x, y)


def tnorm_array(fam: TNormFamily, x: ArrayLike, y: ArrayLike) -> FloatArray:
    return _tnorm_kernel(fam, _unit_array(x, "x"), _unit_array(y, "y"))


def conorm_array(fam: TNormFamily, x: ArrayLike, y: ArrayLike) -> FloatArray:
    """Dual conorm ⊥(x, y) = 1 - ⊤(1 - x, 1 - y)."""
    xs = _unit_array(x, "x")
    ys = _unit_array(y, "y")
    if fam.kind == TNormKind.min_max:
        return np.maximum(xs, ys)
    return 1.0 - _tnorm_kernel(fam, 1.0 - xs, 1.0 - ys)


def tnorm(fam: TNormFamily, x: float, y: float) -> float:
    return float(tnorm_array(fam, x, y))


def conorm(fam: TNormFamily, x: float, y: float) -> float:
    return float(conorm_array(fam, x, y))


def ss_tnorm_stable(p: float, x: float, y: float) -> float:
    """Log-domain Schweizer–Sklar t-norm for p < 0; never exceeds min(x, y)."""
    if not p < 0.0:
        raise DomainError(f"ss_tnorm_stable requires p < 0, got {p}")
    return float(_ss_negative(p, _unit_array(x, "x"), _unit_array(y, "y")))


# ── additive generators ─────────────────────────────────────────────────────


def generator_parameter(fam: TNormFamily) -> float:
    """SS parameter of an additively generated family (product ≡ p = 0)."""
    if fam.kind in (TNormKind.min_max, TNormKind.drastic):
        raise NotAdditivelyGenerated(f"{fam.kind.value} is not additively generated")
    if fam.kind == TNormKind.product:
        return 0.0
    return _ss_parameter(fam)


def generator_array(
    fam: TNormFamily,
    x: ArrayLike,
    *,
    clamp_floor: float | None = None,
) -> FloatArray:
    p = generator_parameter(fam)
    xs = _unit_array(x, "x")
    floor = get_settings().clamp_floor if clamp_floor is None else clamp_floor
    if p <= 0.0 and np.any(xs < floor):
        raise DomainError(f"generator input below clamp floor {floor:g}")
    if p == 0.0:
        return -np.log(xs)
    if p < 0.0:
        # (1 - x^p) / p, written with expm1 for accuracy near x = 1
        return -np.expm1(p * np.log(xs)) / p
    return (1.0 - np.power(xs, p)) / p


def generator(fam: TNormFamily, x: float, *, clamp_floor: float | None = None) -> float:
    return float(generator_array(fam, x, clamp_floor=clamp_floor))


def generator_inverse_array(fam: TNormFamily, u: ArrayLike) -> FloatArray:
    p = generator_parameter(fam)
    us = np.asarray(u, dtype=np.float64)
    if np.any(~(us >= 0.0)):
        raise DomainError("generator inverse requires u >= 0")
    if p == 0.0:
        return np.exp(-us)
    if p < 0.0:
        return np.exp(np.log1p(-p * us) / p)
    # pseudo-inverse: f(0) = 1/p, everything beyond maps to 0
    base = np.maximum(0.0, 1.0 - p * us)
    return np.power(base, 1.0 / p)


def generator_inverse(fam: TNormFamily, u: float) -> float:
    return float(generator_inverse_array(fam, u))


# ── residuum ────────────────────────────────────────────────────────────────


def residuum_array(fam: TNormFamily, x: ArrayLike, y: ArrayLike) -> FloatArray:
    """R(x, y) = sup{z : ⊤(x, z) <= y}."""
    xs, ys = np.broadcast_arrays(_unit_array(x, "x"), _unit_array(y, "y"))
    below = xs <= ys
    if fam.kind == TNormKind.drastic:
        raise UnsupportedOperation("drastic t-norm has no residuum here")
    if fam.kind == TNormKind.min_max:
        return np.where(below, 1.0, ys)
    p = generator_parameter(fam)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        if p == 0.0:
            raw = ys / xs
        elif p < 0.0:
            # z^p = 1 + y^p - x^p, evaluated around b = p ln y >= a = p ln x
            a = p * np.log(xs)
            b = p * np.log(ys)
            raw = np.exp((b + _log1p_scaled(b, a, -1.0)) / p)
            raw = np.where(ys == 0.0, 0.0, raw)
        else:
            raw = np.power(np.maximum(0.0, 1.0 + np.power(ys, p) - np.power(xs, p)), 1.0 / p)
    return np.where(below, 1.0, np.clip(raw, 0.0, 1.0))


def residuum(fam: TNormFamily, x: float, y: float) -> float:
    return float(residuum_array(fam, x, y))


# ── distributivity ──────────────────────────────────────────────────────────


def _defect_kernel(fam: TNormFamily, x: FloatArray, y: FloatArray, z: FloatArray) -> FloatArray:
    lhs = tnorm_array(fam, x, conorm_array(fam, y, z))
    rhs = conorm_array(fam, tnorm_array(fam, x, y), tnorm_array(fam, x, z))
    return np.abs(lhs - rhs)


def pointwise_defect(fam: TNormFamily, x: float, y: float, z: float) -> float:
    """|⊤(x, ⊥(y, z)) - ⊥(⊤(x, y), ⊤(x, z))| at a single point."""
    return float(_defect_kernel(fam, np.asarray(x), np.asarray(y), np.asarray(z)))


def distributivity_defect(
    fam: TNormFamily,
    grid: int,
    metric: DefectMetric = DefectMetric.max,
) -> DefectReport:
    if grid < 2:
        raise ValueError("grid must be >= 2")
    axis = np.linspace(0.0, 1.0, grid)
    x, y, z = np.meshgrid(axis, axis, axis, indexing="ij")
    defect = _defect_kernel(fam, x, y, z)
    max_defect = float(defect.max())
    mean_defect = float(defect.mean())
    return DefectReport(
        family=fam.kind.value,
        p=fam.p,
        grid=grid,
        max_defect=max_defect,
        mean_defect=mean_defect,
        metric=metric,
        defect=max_defect if metric == DefectMetric.max else mean_defect,
    )


def defect_sweep(
    families: Iterable[TNormFamily],
    grid: int,
    metric: DefectMetric = DefectMetric.max,
) -> list[DefectReport]:
    """Defect reports for ``families``, always led by the min/max reference row."""
    start = time.perf_counter()
    ordered = [TNormFamily.min_max()]
    ordered.extend(fam for fam in families if fam.kind != TNormKind.min_max)
    try:
        reports = [distributivity_defect(fam, grid, metric) for fam in ordered]
    except Exception as exc:
        log_timing("defect_sweep", start, False, str(exc), grid=grid)
        raise
    log_timing("defect_sweep", start, True, grid=grid, metric=metric.value, rows=len(reports))
    return reports


def write_defect_csv(reports: Iterable[DefectReport], path: Path) -> None:
    frame = pd.DataFrame([report.model_dump(mode="json") for report in reports])
    frame.reindex(columns=DEFECT_CSV_COLUMNS).to_csv(path, index=False, float_format="%.17g")


def min_distance(p: float, grid: int = 99, lower: float = 0.05) -> float:
    """Max |⊤^SS_p - min| over ``linspace(lower, 1, grid)²``."""
    axis = np.linspace(lower, 1.0, grid)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    ss = tnorm_array(TNormFamily.schweizer_sklar(p), x, y)
    return float(np.max(np.abs(ss - np.minimum(x, y))))
