"""Shared pytest fixtures: family lists, σ configurations, fresh settings."""

from __future__ import annotations

from collections.abc import Callable, Iterator

import numpy as np
import pytest

from pbitq.config import get_settings
from pbitq.models.enums import OpMap, SigmaConvention
from pbitq.schemas.families import SigmaConfig, TNormFamily

AUDIT_P_VALUES = (-1.0, -2.0, -4.0, -8.0, -16.0, -32.0)


@pytest.fixture(autouse=True)
def fresh_settings() -> Iterator[None]:
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def lattice_families() -> list[TNormFamily]:
    """Families used for the crisp-boundary and De Morgan laws."""
    return [
        TNormFamily.min_max(),
        TNormFamily.product(),
        TNormFamily.schweizer_sklar(-1.0),
        TNormFamily.schweizer_sklar(-8.0),
    ]


@pytest.fixture
def sigma_config() -> Callable[..., SigmaConfig]:
    def build(
        p: float = -1.0,
        convention: SigmaConvention = SigmaConvention.pure_generator,
        op_map: OpMap = OpMap.printed,
    ) -> SigmaConfig:
        return SigmaConfig(
            family=TNormFamily.schweizer_sklar(p),
            convention=convention,
            op_map=op_map,
        )

    return build


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
