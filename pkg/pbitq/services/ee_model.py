"""Evidential-error smoothing: count perturbations, the smoothed meet, and SS fitting."""

from __future__ import annotations

import math
import time
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd

from pbitq.config import get_settings
from pbitq.log import log_timing
from pbitq.models.enums import KernelKind, ShiftMode
from pbitq.models.values import Evidence, TruthPair
from pbitq.schemas.families import NoiseModel, TNormFamily
from pbitq.schemas.reports import EE_FIT_CSV_COLUMNS, EeFitRow, EvidenceSurface, SsFit
from pbitq.services import logic_core, tnorm_engine

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

_BATCH_SIZE = 1 << 16
_MIN_MAX = TNormFamily.min_max()


class NoiseBoundError(ValueError):
    """Raised when the perturbation bound K exceeds a quarter of the total count."""


class DegenerateSurface(ValueError):
    """Raised when a surface carries no information about the SS parameter."""


@dataclass(frozen=True, slots=True, eq=False)
class EvidenceDistribution:
    """Finite distribution over (n⁺, n⁻) count pairs out of ``total``."""

    n_plus: IntArray
    n_minus: IntArray
    probs: FloatArray
    total: int

    @property
    def is_point_mass(self) -> bool:
        return len(self.probs) == 1

    def mean(self) -> tuple[float, float]:
        return float(self.probs @ self.n_plus), float(self.probs @ self.n_minus)

    def cdf(self) -> FloatArray:
        cumulative = np.cumsum(self.probs)
        cumulative[-1] = 1.0
        return cumulative

    def draw(self, rng: np.random.Generator, size: int) -> IntArray:
        """Indices into the support, sampled by inverse CDF."""
        return np.searchsorted(self.cdf(), rng.random(size), side="right").astype(np.int64)


# ── kernels ─────────────────────────────────────────────────────────────────


def _binomial_pmf(trials: int, prob: float) -> FloatArray:
    """Bin(trials, prob) pmf, built in log space so large trial counts stay finite."""
    pmf = np.zeros(trials + 1)
    if prob == 0.0:
        pmf[0] = 1.0
        return pmf
    if prob == 1.0:
        pmf[-1] = 1.0
        return pmf
    j = np.arange(trials + 1, dtype=np.float64)
    # log C(n, j) as a running sum of log((n - j + 1) / j)
    log_comb = np.concatenate(([0.0], np.cumsum(np.log(trials - j[1:] + 1.0) - np.log(j[1:]))))
    log_pmf = log_comb + j * math.log(prob) + (trials - j) * math.log1p(-prob)
    pmf = np.exp(log_pmf - log_pmf.max())
    return pmf / pmf.sum()


def kernel_pmf(nm: NoiseModel) -> FloatArray:
    """pmf of the shift k over -K..K (index i ↔ k = i - K); symmetric, mean zero."""
    bound = nm.bound
    if nm.kernel == KernelKind.binomial_symmetric:
        single = _binomial_pmf(bound, nm.epsilon)
        # k = B1 - B2
        return np.convolve(single, single[::-1])
    pmf = np.zeros(2 * bound + 1)
    pmf[bound] = 1.0 - nm.epsilon
    if bound > 0:
        off_center = nm.epsilon / (2 * bound)
        pmf[:bound] = off_center
        pmf[bound + 1 :] = off_center
    else:
        pmf[bound] = 1.0
    return pmf


def perturb(nm: NoiseModel, e: Evidence) -> EvidenceDistribution:
    """Exact distribution of shifted counts; truncation keeps the kernel symmetric."""
    if nm.bound * 4 > e.total:
        raise NoiseBoundError(f"bound K={nm.bound} exceeds total/4 for total={e.total}")
    pmf = kernel_pmf(nm)
    reach = min(nm.bound, e.n_plus, e.n_minus, e.total - e.n_plus, e.total - e.n_minus)
    kept = pmf[nm.bound - reach : nm.bound + reach + 1]
    shifts = np.arange(-reach, reach + 1, dtype=np.int64)
    nonzero = kept > 0.0
    shifts, kept = shifts[nonzero], kept[nonzero]
    probs = kept / kept.sum()

    n_plus = e.n_plus - shifts
    if nm.shift_mode == ShiftMode.common_shift:
        n_minus = e.n_minus - shifts
    else:
        n_minus = e.n_minus + shifts
    return EvidenceDistribution(n_plus=n_plus, n_minus=n_minus, probs=probs, total=e.total)


# ── smoothed meet ───────────────────────────────────────────────────────────


def _evidence_key(e: Evidence) -> tuple[int, int, int]:
    return e.n_plus, e.n_minus, e.total


def ee_meet_star(
    e1: Evidence,
    e2: Evidence,
    nm: NoiseModel,
    samples: int,
    seed: int,
) -> TruthPair:
    """Monte Carlo mean of the min/max fuzzy meet over perturbed evidence."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if _evidence_key(e2) < _evidence_key(e1):
        e1, e2 = e2, e1
    d1, d2 = perturb(nm, e1), perturb(nm, e2)
    if d1.is_point_mass and d2.is_point_mass:
        return logic_core.fuzzy_meet(logic_core.normalize(e1), logic_core.normalize(e2), _MIN_MAX)

    sum_plus = 0.0
    sum_minus = 0.0
    for batch_index, offset in enumerate(range(0, samples, _BATCH_SIZE)):
        size = min(_BATCH_SIZE, samples - offset)
        rng = np.random.default_rng(np.random.SeedSequence([seed, batch_index]))
        i1 = d1.draw(rng, size)
        i2 = d2.draw(rng, size)
        meet_plus = tnorm_engine.tnorm_array(
            _MIN_MAX, d1.n_plus[i1] / d1.total, d2.n_plus[i2] / d2.total
        )
        meet_minus = tnorm_engine.conorm_array(
            _MIN_MAX, d1.n_minus[i1] / d1.total, d2.n_minus[i2] / d2.total
        )
        sum_plus += float(meet_plus.sum())
        sum_minus += float(meet_minus.sum())

    return TruthPair(min(sum_plus / samples, 1.0), min(sum_minus / samples, 1.0))


def smoothed_tnorm_surface(
    nm: NoiseModel,
    total: int,
    grid: int,
    samples: int,
    seed: int,
) -> EvidenceSurface:
    """First component of the smoothed meet on a grid of count levels round(x·N)."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    start = time.perf_counter()
    counts = [round(x * total) for x in np.linspace(0.0, 1.0, grid)]
    dists = [perturb(nm, Evidence(n, total - n, total)) for n in counts]
    values = np.empty((grid, grid))
    stderr = np.zeros((grid, grid))
    # fill i <= j, mirror below the diagonal
    for i, di in enumerate(dists):
        for j in range(i, grid):
            dj = dists[j]
            if di.is_point_mass and dj.is_point_mass:
                values[i, j] = values[j, i] = min(counts[i], counts[j]) / total
                continue
            rng = np.random.default_rng(np.random.SeedSequence([seed, i, j]))
            draws = np.minimum(di.n_plus[di.draw(rng, samples)], dj.n_plus[dj.draw(rng, samples)])
            smoothed = draws / total
            values[i, j] = values[j, i] = float(smoothed.mean())
            stderr[i, j] = stderr[j, i] = float(smoothed.std() / math.sqrt(samples))
    log_timing(
        "smoothed_tnorm_surface",
        start,
        True,
        epsilon=nm.epsilon,
        grid=grid,
        samples=samples,
    )
    return EvidenceSurface(
        axis=[n / total for n in counts],
        values=values.tolist(),
        stderr=stderr.tolist(),
        total=total,
        samples=samples,
        seed=seed,
    )


def ss_surface(p: float, axis: Sequence[float]) -> EvidenceSurface:
    """Noise-free ⊤^SS_p on ``axis × axis``, in the same shape as a smoothed surface."""
    xs = np.asarray(axis, dtype=np.float64)
    x, y = np.meshgrid(xs, xs, indexing="ij")
    values = tnorm_engine.tnorm_array(TNormFamily.schweizer_sklar(p), x, y)
    return EvidenceSurface(axis=list(map(float, xs)), values=values.tolist())


# ── fitting ─────────────────────────────────────────────────────────────────


def _golden_section(
    objective: _Objective,
    a: float,
    b: float,
    tol: float,
) -> float:
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return (a + b) / 2

    steps = math.ceil(math.log(tol / h) / math.log(INV_PHI))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = objective(c)
    yd = objective(d)
    for _ in range(steps - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI_SQUARE * h
            yc = objective(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = objective(d)
    return (a + d) / 2 if yc < yd else (c + b) / 2


class _Objective:
    """Residual sum of squares of ⊤^SS_p against a surface, parameterised by u = ln(-p)."""

    def __init__(self, surface: EvidenceSurface) -> None:
        xs = np.asarray(surface.axis, dtype=np.float64)
        self.x, self.y = np.meshgrid(xs, xs, indexing="ij")
        self.target = np.asarray(surface.values, dtype=np.float64)

    def rss(self, p: float) -> float:
        fitted = tnorm_engine.tnorm_array(TNormFamily.schweizer_sklar(p), self.x, self.y)
        return float(np.sum((fitted - self.target) ** 2))

    def __call__(self, u: float) -> float:
        return self.rss(-math.exp(u))


def fit_ss_parameter(
    surface: EvidenceSurface,
    *,
    lower: float | None = None,
    upper: float | None = None,
    tolerance: float | None = None,
) -> SsFit:
    """Least-squares p̂ < 0 by golden-section search over ln(-p) in [lower, upper]."""
    settings = get_settings()
    lo = settings.ss_search_lower if lower is None else lower
    hi = settings.ss_search_upper if upper is None else upper
    tol = settings.ss_search_tolerance if tolerance is None else tolerance
    if not lo < hi < 0.0:
        raise ValueError(f"search interval must satisfy lower < upper < 0, got [{lo}, {hi}]")

    values = np.asarray(surface.values, dtype=np.float64)
    if values.size == 0 or np.all(values == 1.0):
        raise DegenerateSurface("surface is constant 1 and carries no parameter information")

    start = time.perf_counter()
    objective = _Objective(surface)
    u_hat = _golden_section(objective, math.log(-hi), math.log(-lo), tol)
    p_hat = -math.exp(u_hat)
    at_bound = abs(p_hat - lo) <= 1e-3 * abs(lo) or abs(p_hat - hi) <= 1e-3 * abs(hi)
    fit = SsFit(p_hat=p_hat, fit_rss=objective.rss(p_hat), at_bound=at_bound)
    log_timing("fit_ss_parameter", start, True, p_hat=p_hat, at_bound=at_bound)
    return fit


def ee_fit(
    epsilons: Sequence[float],
    *,
    total: int,
    grid: int,
    samples: int,
    seed: int,
    bound: int | None = None,
    shift_mode: ShiftMode = ShiftMode.common_shift,
    kernel: KernelKind = KernelKind.binomial_symmetric,
) -> list[EeFitRow]:
    """Fit the effective SS parameter of the smoothed meet for each ε."""
    rows: list[EeFitRow] = []
    for epsilon in epsilons:
        nm = NoiseModel(
            epsilon=epsilon,
            shift_mode=shift_mode,
            kernel=kernel,
            bound=get_settings().ee_default_bound if bound is None else bound,
        )
        surface = smoothed_tnorm_surface(nm, total, grid, samples, seed)
        fit = fit_ss_parameter(surface)
        rows.append(
            EeFitRow(
                epsilon=epsilon,
                shift_mode=shift_mode,
                kernel=kernel,
                K=nm.bound,
                N=total,
                samples=samples,
                seed=seed,
                p_hat=fit.p_hat,
                fit_rss=fit.fit_rss,
                at_bound=fit.at_bound,
            )
        )
    return rows


def write_ee_fit_csv(rows: Sequence[EeFitRow], path: Path) -> None:
    frame = pd.DataFrame([row.model_dump(mode="json") for row in rows])
    frame.reindex(columns=EE_FIT_CSV_COLUMNS).to_csv(path, index=False, float_format="%.17g")
