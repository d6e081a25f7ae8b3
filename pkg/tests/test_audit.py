from __future__ import annotations

import math
from collections import Counter
from pathlib import Path

import pandas as pd
import pytest

from pbitq.models.enums import Identity, OpMap, SigmaConvention
from pbitq.schemas.families import SigmaConfig, TNormFamily
from pbitq.schemas.reports import AuditReport
from pbitq.services import audit_service
from tests.conftest import AUDIT_P_VALUES

SAMPLES = 1000


@pytest.fixture(scope="module")
def full_sweep() -> AuditReport:
    return audit_service.sweep(AUDIT_P_VALUES, SAMPLES, seed=42)


def test_sweep_has_one_row_per_identity_and_combination(
    full_sweep: AuditReport,
) -> None:
    counts = Counter(row.identity for row in full_sweep.rows)
    assert counts == {identity: 36 for identity in Identity}
    assert all(row.samples == SAMPLES and row.seed == 42 for row in full_sweep.rows)


@pytest.mark.parametrize("p", AUDIT_P_VALUES)
def test_meet_maps_to_addition_under_pure_generator(
    p: float, full_sweep: AuditReport
) -> None:
    row = full_sweep.lookup(
        Identity.meet, convention=SigmaConvention.pure_generator, op_map=OpMap.printed, p=p
    )
    assert row.max_scaled_err <= 1e-9


@pytest.mark.parametrize("p", AUDIT_P_VALUES)
def test_printed_sigma_meets_with_unit_offset(
    p: float, full_sweep: AuditReport
) -> None:
    row = full_sweep.lookup(
        Identity.meet_offset, convention=SigmaConvention.printed, op_map=OpMap.printed, p=p
    )
    assert row.max_scaled_err <= 1e-9


@pytest.mark.parametrize("p", AUDIT_P_VALUES)
def test_symmetric_sigma_is_negation_equivariant(
    p: float, full_sweep: AuditReport
) -> None:
    for op_map in OpMap:
        row = full_sweep.lookup(
            Identity.negation, convention=SigmaConvention.symmetric, op_map=op_map, p=p
        )
        assert row.max_scaled_err <= 1e-12


def test_join_rows_are_approximate_but_finite(full_sweep: AuditReport) -> None:
    join_rows = [row for row in full_sweep.rows if row.identity == Identity.join]
    assert all(math.isfinite(row.max_abs_err) for row in join_rows)
    assert any(row.max_scaled_err > 1e-6 for row in join_rows)


def test_scaled_error_never_exceeds_absolute_error(full_sweep: AuditReport) -> None:
    for row in full_sweep.rows:
        assert row.max_scaled_err <= row.max_abs_err
        assert row.mean_scaled_err <= row.mean_abs_err
        assert row.mean_abs_err <= row.max_abs_err


def test_lookup_reports_missing_rows(full_sweep: AuditReport) -> None:
    with pytest.raises(LookupError):
        full_sweep.lookup(
            Identity.meet, convention=SigmaConvention.symmetric, op_map=OpMap.printed, p=-3.0
        )


def test_audit_is_deterministic_and_independent_of_workers() -> None:
    configs = audit_service.config_grid([-2.0])
    serial = audit_service.audit_identities(configs, 300, seed=7, workers=1)
    threaded = audit_service.audit_identities(configs, 300, seed=7, workers=3)
    again = audit_service.audit_identities(configs, 300, seed=7)
    assert serial == threaded == again


def test_product_family_reports_p_zero() -> None:
    cfg = SigmaConfig(family=TNormFamily.product())
    report = audit_service.audit_identities([cfg], 200, seed=1, identities=[Identity.meet])
    assert len(report.rows) == 1
    assert report.rows[0].p == 0.0
    assert report.rows[0].max_abs_err <= 1e-9
    assert report.rows[0].max_scaled_err <= 1e-9


def test_config_grid_rejects_non_negative_p() -> None:
    with pytest.raises(ValueError, match="p < 0"):
        audit_service.config_grid([-1.0, 0.0])


def test_sigma_rejects_parameters_whose_generator_overflows() -> None:
    with pytest.raises(ValueError, match="overflows"):
        SigmaConfig(family=TNormFamily.schweizer_sklar(-64.0))
    SigmaConfig(family=TNormFamily.schweizer_sklar(-34.0))
    SigmaConfig(family=TNormFamily.schweizer_sklar(-64.0), clamp_floor=1e-3)


def test_sweep_rejects_overflowing_parameters_before_sampling() -> None:
    with pytest.raises(ValueError, match="overflows"):
        audit_service.sweep([-2.0, -64.0], 100, seed=1)


def test_audit_rejects_empty_sample_budget() -> None:
    with pytest.raises(ValueError):
        audit_service.audit_identities(audit_service.config_grid([-1.0]), 0, seed=1)


def test_sweep_writes_csv(tmp_path: Path) -> None:
    out = tmp_path / "audit.csv"
    audit_service.sweep([-1.0], 100, seed=3, out=out)
    frame = pd.read_csv(out)
    assert list(frame.columns) == [
        "p",
        "family",
        "sigma_convention",
        "op_map",
        "identity",
        "max_abs_err",
        "mean_abs_err",
        "max_scaled_err",
        "mean_scaled_err",
        "samples",
        "seed",
    ]
    assert len(frame) == 24
    assert (frame.groupby("identity").size() == 6).all()


def test_demorgan_check_holds_for_every_family() -> None:
    families = [
        TNormFamily.min_max(),
        TNormFamily.product(),
        TNormFamily.drastic(),
        TNormFamily.schweizer_sklar(-8.0),
    ]
    rows = audit_service.demorgan_check(families, 10_000, seed=11)
    assert [row.family for row in rows] == ["min_max", "product", "drastic", "schweizer_sklar"]
    for row in rows:
        assert row.join_law_max_err <= 1e-12
        assert row.meet_law_max_err <= 1e-12
