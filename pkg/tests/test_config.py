from __future__ import annotations

import pytest
from pydantic import ValidationError

from pbitq.config import LogFormat, Settings, get_settings
from pbitq.models.enums import ImplVariant


def test_defaults() -> None:
    settings = Settings()
    assert settings.clamp_floor == 1e-9
    assert settings.default_seed == 42
    assert settings.ee_default_bound == 50
    assert settings.impl_variant == ImplVariant.printed
    assert settings.log_format == LogFormat.console
    assert (settings.ss_search_lower, settings.ss_search_upper) == (-1e4, -0.1)


def test_environment_overrides(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("PBITQ_WORKERS", "4")
    monkeypatch.setenv("PBITQ_IMPL_VARIANT", "standard")
    settings = get_settings()
    assert settings.workers == 4
    assert settings.impl_variant == ImplVariant.standard
    assert get_settings() is settings


@pytest.mark.parametrize(("name", "value"), [("PBITQ_CLAMP_FLOOR", "0.7"), ("PBITQ_WORKERS", "0")])
def test_invalid_values_are_rejected(
    monkeypatch: pytest.MonkeyPatch, name: str, value: str
) -> None:
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings()
