from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from pbitq.models.enums import KernelKind, ShiftMode
from pbitq.models.values import Evidence, TruthPair
from pbitq.schemas.families import NoiseModel
from pbitq.schemas.reports import EvidenceSurface
from pbitq.services import ee_model
from pbitq.services.ee_model import DegenerateSurface, NoiseBoundError


@pytest.mark.parametrize("kernel", list(KernelKind))
def test_kernels_are_symmetric_distributions(kernel: KernelKind) -> None:
    pmf = ee_model.kernel_pmf(NoiseModel(epsilon=0.2, kernel=kernel, bound=6))
    assert len(pmf) == 13
    assert pmf.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(pmf, pmf[::-1], atol=1e-15)


def test_binomial_kernel_matches_the_closed_form() -> None:
    pmf = ee_model.kernel_pmf(NoiseModel(epsilon=0.2, bound=1))
    assert pmf.tolist() == pytest.approx([0.16, 0.68, 0.16], abs=1e-15)


def test_large_bound_kernel_stays_finite() -> None:
    nm = NoiseModel(epsilon=0.1, bound=1100)
    pmf = ee_model.kernel_pmf(nm)
    assert len(pmf) == 2201
    assert np.all(np.isfinite(pmf))
    assert pmf.sum() == pytest.approx(1.0, abs=1e-12)

    dist = ee_model.perturb(nm, Evidence(2500, 2500, 5000))
    mean_plus, mean_minus = dist.mean()
    assert mean_plus == pytest.approx(2500.0, abs=1e-6)
    assert mean_minus == pytest.approx(2500.0, abs=1e-6)


def test_zero_noise_is_a_point_mass() -> None:
    dist = ee_model.perturb(NoiseModel(epsilon=0.0, bound=5), Evidence(30, 60, 100))
    assert dist.is_point_mass
    assert dist.mean() == (30.0, 60.0)


@pytest.mark.parametrize("kernel", list(KernelKind))
@pytest.mark.parametrize("shift_mode", list(ShiftMode))
def test_perturb_preserves_the_mean(kernel: KernelKind, shift_mode: ShiftMode) -> None:
    nm = NoiseModel(epsilon=0.1, shift_mode=shift_mode, kernel=kernel, bound=50)
    for evidence in (Evidence(300, 500, 1000), Evidence(3, 990, 1000), Evidence(1000, 0, 1000)):
        dist = ee_model.perturb(nm, evidence)
        assert dist.probs.sum() == pytest.approx(1.0, abs=1e-12)
        mean_plus, mean_minus = dist.mean()
        assert mean_plus == pytest.approx(evidence.n_plus, abs=1e-9)
        assert mean_minus == pytest.approx(evidence.n_minus, abs=1e-9)
        assert dist.n_plus.min() >= 0 and dist.n_plus.max() <= evidence.total
        assert dist.n_minus.min() >= 0 and dist.n_minus.max() <= evidence.total


def test_shift_modes_move_counts_together_or_apart() -> None:
    evidence = Evidence(400, 400, 1000)
    common = ee_model.perturb(
        NoiseModel(epsilon=0.3, shift_mode=ShiftMode.common_shift, bound=4), evidence
    )
    swap = ee_model.perturb(
        NoiseModel(epsilon=0.3, shift_mode=ShiftMode.swap_shift, bound=4), evidence
    )
    assert np.all(common.n_plus - common.n_minus == 0)
    assert np.all(swap.n_plus + swap.n_minus == 800)


def test_truncation_stays_inside_the_count_range() -> None:
    dist = ee_model.perturb(NoiseModel(epsilon=0.4, bound=50), Evidence(3, 990, 1000))
    assert dist.n_plus.min() == 0
    assert dist.n_plus.max() == 6


def test_bound_larger_than_a_quarter_of_total_is_rejected() -> None:
    with pytest.raises(NoiseBoundError):
        ee_model.perturb(NoiseModel(epsilon=0.1, bound=50), Evidence(1, 1, 10))


def test_noise_model_validates_epsilon() -> None:
    with pytest.raises(ValueError):
        NoiseModel(epsilon=1.0)
    assert NoiseModel(epsilon=0.1).bound == 50


def test_zero_noise_meet_is_the_exact_min_max_meet() -> None:
    nm = NoiseModel(epsilon=0.0, bound=2)
    result = ee_model.ee_meet_star(Evidence(8, 1, 10), Evidence(5, 6, 10), nm, 100, seed=1)
    assert result == TruthPair(0.5, 0.6)


def test_smoothed_meet_lies_below_the_crisp_meet_on_the_diagonal() -> None:
    nm = NoiseModel(epsilon=0.2, bound=20)
    e = Evidence(500, 300, 1000)
    smoothed = ee_model.ee_meet_star(e, e, nm, 200_000, seed=5)
    assert smoothed.w_plus < 0.5
    assert smoothed.w_minus > 0.3
    again = ee_model.ee_meet_star(e, e, nm, 200_000, seed=5)
    assert again == smoothed


def test_meet_does_not_depend_on_argument_order() -> None:
    nm = NoiseModel(epsilon=0.2, bound=20)
    a = Evidence(500, 300, 1000)
    b = Evidence(400, 450, 1000)
    forward = ee_model.ee_meet_star(a, b, nm, 50_000, seed=5)
    backward = ee_model.ee_meet_star(b, a, nm, 50_000, seed=5)
    assert forward == backward
    assert forward.w_plus <= 0.4 + 1e-3
    assert forward.w_minus >= 0.45 - 1e-3


def test_meet_requires_samples() -> None:
    with pytest.raises(ValueError):
        ee_model.ee_meet_star(
            Evidence(1, 1, 10), Evidence(1, 1, 10), NoiseModel(epsilon=0.1, bound=1), 0, seed=1
        )


def test_zero_noise_surface_is_the_min_surface() -> None:
    surface = ee_model.smoothed_tnorm_surface(
        NoiseModel(epsilon=0.0, bound=10), total=100, grid=5, samples=50, seed=3
    )
    axis = np.asarray(surface.axis)
    assert np.array_equal(np.asarray(surface.values), np.minimum.outer(axis, axis))
    assert np.all(np.asarray(surface.stderr) == 0.0)


def test_surface_is_symmetric_and_below_the_min_surface() -> None:
    surface = ee_model.smoothed_tnorm_surface(
        NoiseModel(epsilon=0.1, bound=20), total=400, grid=6, samples=20_000, seed=9
    )
    axis = np.asarray(surface.axis)
    values = np.asarray(surface.values)
    stderr = np.asarray(surface.stderr)
    assert np.array_equal(values, values.T)
    assert np.array_equal(stderr, stderr.T)
    assert np.all(values <= np.minimum.outer(axis, axis) + 3 * stderr + 1e-12)
    # strictly below min on the interior diagonal, where both operands jitter
    interior = np.arange(1, len(axis) - 1)
    assert np.all(values[interior, interior] < axis[interior])


def test_self_fit_recovers_the_generating_parameter() -> None:
    surface = ee_model.ss_surface(-8.0, np.linspace(0.0, 1.0, 21))
    fit = ee_model.fit_ss_parameter(surface)
    assert fit.p_hat == pytest.approx(-8.0, abs=0.5)
    assert fit.fit_rss < 1e-12
    assert not fit.at_bound


def test_noiseless_surface_fit_runs_to_the_bound() -> None:
    surface = ee_model.smoothed_tnorm_surface(
        NoiseModel(epsilon=0.0, bound=10), total=100, grid=11, samples=10, seed=3
    )
    assert ee_model.fit_ss_parameter(surface).at_bound


def test_constant_surface_is_degenerate() -> None:
    surface = EvidenceSurface(axis=[0.0, 1.0], values=[[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DegenerateSurface):
        ee_model.fit_ss_parameter(surface)


def test_fitted_parameter_steepens_as_noise_vanishes() -> None:
    rows = ee_model.ee_fit(
        [0.2, 0.1, 0.05, 0.02], total=1000, grid=11, samples=100_000, seed=42
    )
    p_hats = [row.p_hat for row in rows]
    assert all(later < earlier for earlier, later in zip(p_hats, p_hats[1:], strict=False))
    assert all(row.K == 50 and row.N == 1000 for row in rows)


def test_ee_fit_csv(tmp_path: Path) -> None:
    rows = ee_model.ee_fit(
        [0.1],
        total=200,
        grid=5,
        samples=2000,
        seed=1,
        bound=10,
        kernel=KernelKind.discrete_uniform,
    )
    out = tmp_path / "ee.csv"
    ee_model.write_ee_fit_csv(rows, out)
    frame = pd.read_csv(out)
    assert list(frame.columns) == [
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
    assert frame.loc[0, "kernel"] == "discrete_uniform"
    assert frame.loc[0, "p_hat"] < 0
