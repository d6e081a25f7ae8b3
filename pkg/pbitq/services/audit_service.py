"""Monte Carlo audit of the σ homomorphism identities, and the error-vs-p sweep."""

from __future__ import annotations

import itertools
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from pbitq.config import get_settings
from pbitq.log import log_timing
from pbitq.models.enums import Identity, OpMap, SigmaConvention
from pbitq.models.values import DomainError
from pbitq.schemas.families import SigmaConfig, TNormFamily
from pbitq.schemas.reports import AUDIT_CSV_COLUMNS, AuditReport, AuditRow, DeMorganRow
from pbitq.services import tnorm_engine
from pbitq.services.quantum_map import (
    ComplexArray,
    FloatArray,
    absolute_error,
    join_operator,
    meet_operator,
    scaled_error,
    sigma_array,
)

_OFFSET = 1j  # printed σ carries a constant +1 in the second coordinate


class ExperimentError(RuntimeError):
    """Raised when an experiment runner fails for reasons other than bad input."""


@dataclass(frozen=True, slots=True)
class _Batch:
    a_plus: FloatArray
    a_minus: FloatArray
    b_plus: FloatArray
    b_minus: FloatArray


def _draw_batch(cfg: SigmaConfig, samples: int, seed: int, row_index: int) -> _Batch:
    rng = np.random.default_rng(np.random.SeedSequence([seed, row_index]))
    draws = rng.uniform(cfg.clamp_floor, 1.0, size=(4, samples))
    return _Batch(draws[0], draws[1], draws[2], draws[3])


def _complex_op(op: str, x: ComplexArray, y: ComplexArray) -> ComplexArray:
    return x + y if op == "add" else x * y


def _identity_sides(
    cfg: SigmaConfig, identity: Identity, batch: _Batch
) -> tuple[ComplexArray, ComplexArray]:
    fam = cfg.family
    sa = sigma_array(cfg, batch.a_plus, batch.a_minus)
    sb = sigma_array(cfg, batch.b_plus, batch.b_minus)
    meet_op = meet_operator(cfg.op_map)
    join_op = join_operator(cfg.op_map)

    if identity == Identity.negation:
        lhs = sigma_array(cfg, batch.a_minus, batch.a_plus)
        rhs = sa.imag + 1j * sa.real
        return lhs, rhs

    if identity == Identity.join:
        joined = sigma_array(
            cfg,
            tnorm_engine.conorm_array(fam, batch.a_plus, batch.b_plus),
            tnorm_engine.tnorm_array(fam, batch.a_minus, batch.b_minus),
        )
        return joined, _complex_op(join_op, sa, sb)

    met = sigma_array(
        cfg,
        tnorm_engine.tnorm_array(fam, batch.a_plus, batch.b_plus),
        tnorm_engine.conorm_array(fam, batch.a_minus, batch.b_minus),
    )
    if identity == Identity.meet:
        return met, _complex_op(meet_op, sa, sb)
    return met, sa + sb - _OFFSET


def _audit_row(
    cfg: SigmaConfig,
    identity: Identity,
    samples: int,
    seed: int,
    row_index: int,
) -> AuditRow:
    batch = _draw_batch(cfg, samples, seed, row_index)
    with np.errstate(over="ignore", invalid="ignore"):
        lhs, rhs = _identity_sides(cfg, identity, batch)
        absolute = absolute_error(lhs, rhs)
        scaled = scaled_error(lhs, rhs)
    overflowed = int(np.count_nonzero(~np.isfinite(scaled)))
    if overflowed:
        raise DomainError(
            f"amplitude arithmetic overflowed in {overflowed} of {samples} samples "
            f"for {cfg.family.label} {cfg.convention.value}/{cfg.op_map.value} {identity.value}"
        )
    return AuditRow(
        p=float(tnorm_engine.generator_parameter(cfg.family)),
        family=cfg.family.kind.value,
        sigma_convention=cfg.convention.value,
        op_map=cfg.op_map,
        identity=identity,
        max_abs_err=float(np.max(absolute)),
        mean_abs_err=float(np.mean(absolute)),
        max_scaled_err=float(np.max(scaled)),
        mean_scaled_err=float(np.mean(scaled)),
        samples=samples,
        seed=seed,
    )


def audit_identities(
    configs: Sequence[SigmaConfig],
    samples: int,
    seed: int,
    *,
    identities: Iterable[Identity] = tuple(Identity),
    workers: int | None = None,
) -> AuditReport:
    """One row per (configuration, identity); row k draws from sub-stream (seed, k)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    jobs = list(itertools.product(configs, tuple(identities)))
    n_workers = workers or get_settings().workers
    start = time.perf_counter()

    def run(indexed: tuple[int, tuple[SigmaConfig, Identity]]) -> AuditRow:
        row_index, (cfg, identity) = indexed
        return _audit_row(cfg, identity, samples, seed, row_index)

    try:
        if n_workers > 1:
            with ThreadPoolExecutor(max_workers=n_workers) as pool:
                rows = list(pool.map(run, enumerate(jobs)))
        else:
            rows = [run(item) for item in enumerate(jobs)]
    except ValueError:
        raise
    except Exception as exc:
        log_timing("audit_identities", start, False, str(exc), rows=len(jobs))
        raise ExperimentError(f"audit_identities failed: {exc}") from exc

    log_timing("audit_identities", start, True, rows=len(rows), samples=samples, seed=seed)
    return AuditReport(rows=rows)


def config_grid(p_values: Iterable[float]) -> list[SigmaConfig]:
    """Every (p, convention, op_map) combination for Schweizer–Sklar families."""
    configs: list[SigmaConfig] = []
    for p in p_values:
        if not p < 0.0:
            raise ValueError(f"sweep requires p < 0, got {p}")
        family = TNormFamily.schweizer_sklar(p)
        for convention in SigmaConvention:
            for op_map in OpMap:
                configs.append(SigmaConfig(family=family, convention=convention, op_map=op_map))
    return configs


def write_audit_csv(report: AuditReport, path: Path) -> None:
    frame = pd.DataFrame([row.model_dump(mode="json") for row in report.rows])
    frame.reindex(columns=AUDIT_CSV_COLUMNS).to_csv(path, index=False, float_format="%.17g")


def sweep(
    p_values: Sequence[float],
    samples: int,
    seed: int,
    out: Path | None = None,
    *,
    workers: int | None = None,
) -> AuditReport:
    """Audit all conventions and op maps for every p, optionally writing the CSV."""
    report = audit_identities(config_grid(p_values), samples, seed, workers=workers)
    if out is not None:
        write_audit_csv(report, out)
    return report


PairArrays = tuple[FloatArray, FloatArray]


def _pair_meet(fam: TNormFamily, x: PairArrays, y: PairArrays) -> PairArrays:
    return tnorm_engine.tnorm_array(fam, x[0], y[0]), tnorm_engine.conorm_array(fam, x[1], y[1])


def _pair_join(fam: TNormFamily, x: PairArrays, y: PairArrays) -> PairArrays:
    return tnorm_engine.conorm_array(fam, x[0], y[0]), tnorm_engine.tnorm_array(fam, x[1], y[1])


def _pair_neg(x: PairArrays) -> PairArrays:
    return x[1], x[0]


def _pair_max_err(lhs: PairArrays, rhs: PairArrays) -> float:
    return float(max(np.max(np.abs(lhs[0] - rhs[0])), np.max(np.abs(lhs[1] - rhs[1]))))


def demorgan_check(
    families: Sequence[TNormFamily],
    samples: int,
    seed: int,
) -> list[DeMorganRow]:
    """¬(A⊔B) vs ¬A⊓¬B and ¬(A⊓B) vs ¬A⊔¬B on random pair-pairs, per family."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    start = time.perf_counter()
    rows: list[DeMorganRow] = []
    for row_index, fam in enumerate(families):
        rng = np.random.default_rng(np.random.SeedSequence([seed, row_index]))
        draws = rng.random((4, samples))
        a: PairArrays = (draws[0], draws[1])
        b: PairArrays = (draws[2], draws[3])
        join_law = _pair_max_err(
            _pair_neg(_pair_join(fam, a, b)),
            _pair_meet(fam, _pair_neg(a), _pair_neg(b)),
        )
        meet_law = _pair_max_err(
            _pair_neg(_pair_meet(fam, a, b)),
            _pair_join(fam, _pair_neg(a), _pair_neg(b)),
        )
        rows.append(
            DeMorganRow(
                family=fam.kind.value,
                p=fam.p,
                samples=samples,
                seed=seed,
                join_law_max_err=join_law,
                meet_law_max_err=meet_law,
            )
        )
    log_timing("demorgan_check", start, True, rows=len(rows), samples=samples, seed=seed)
    return rows
