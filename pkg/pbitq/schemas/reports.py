"""Pydantic report models emitted by the experiment services and the CLI."""

from __future__ import annotations

from pydantic import BaseModel, Field

from pbitq.models.enums import DefectMetric, Identity, KernelKind, OpMap, ShiftMode


class DefectReport(BaseModel):
    family: str
    p: float | None = None
    grid: int
    max_defect: float = Field(ge=0.0)
    mean_defect: float = Field(ge=0.0)
    metric: DefectMetric = DefectMetric.max
    defect: float = Field(ge=0.0)  # max_defect or mean_defect, as chosen by metric


DEFECT_CSV_COLUMNS = ["family", "p", "grid", "max_defect", "mean_defect", "metric", "defect"]


class AuditRow(BaseModel):
    p: float
    family: str
    sigma_convention: str
    op_map: OpMap
    identity: Identity
    max_abs_err: float = Field(ge=0.0)
    mean_abs_err: float = Field(ge=0.0)
    max_scaled_err: float = Field(ge=0.0)
    mean_scaled_err: float = Field(ge=0.0)
    samples: int
    seed: int


class AuditReport(BaseModel):
    rows: list[AuditRow] = Field(default_factory=list)

    def lookup(
        self,
        identity: Identity,
        *,
        convention: str,
        op_map: OpMap,
        p: float | None = None,
    ) -> AuditRow:
        for row in self.rows:
            if (
                row.identity == identity
                and row.sigma_convention == convention
                and row.op_map == op_map
                and (p is None or row.p == p)
            ):
                return row
        raise LookupError(f"no audit row for {identity}/{convention}/{op_map}/p={p}")


AUDIT_CSV_COLUMNS = [
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


class EvidenceSurface(BaseModel):
    """Smoothed-min values on the square grid ``axis × axis`` (row i ↔ x, column j ↔ y)."""

    axis: list[float]
    values: list[list[float]]
    stderr: list[list[float]] = Field(default_factory=list)
    total: int | None = None
    samples: int | None = None
    seed: int | None = None


class SsFit(BaseModel):
    p_hat: float
    fit_rss: float = Field(ge=0.0)
    at_bound: bool


class EeFitRow(BaseModel):
    epsilon: float
    shift_mode: ShiftMode
    kernel: KernelKind
    K: int
    N: int
    samples: int
    seed: int
    p_hat: float
    fit_rss: float
    at_bound: bool


EE_FIT_CSV_COLUMNS = [
    "epsilon",
    "shift_mode",
    "kernel",
    "K",
    "N",
    "samples",
    "seed",
    "p_hat",
    "fit_rss",
    "at_bound",
]


class NodeComparison(BaseModel):
    expr: str
    quantum: tuple[float, float]
    sigma_of_fuzzy: tuple[float, float]
    error: float = Field(ge=0.0)


class ComparisonReport(BaseModel):
    nodes: list[NodeComparison] = Field(default_factory=list)
    root_error: float = Field(ge=0.0)


class SampleResult(BaseModel):
    w_plus: float
    w_minus: float
    stderr_plus: float
    stderr_minus: float
    n_plus: int
    n_minus: int
    trials: int
    seed: int


class DeMorganRow(BaseModel):
    """Worst-case deviation of both swap-negation De Morgan laws over random pair-pairs."""

    family: str
    p: float | None = None
    samples: int
    seed: int
    join_law_max_err: float = Field(ge=0.0)
    meet_law_max_err: float = Field(ge=0.0)
