"""Application settings loaded from environment variables via pydantic-settings."""

from enum import StrEnum
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from pbitq.models.enums import ImplVariant


class LogFormat(StrEnum):
    json = "json"
    console = "console"


class Settings(BaseSettings):
    """Central configuration; all values come from env vars or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="PBITQ_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # ── Generator domain ────────────────────────────────────────────────────
    clamp_floor: float = Field(default=1e-9, gt=0.0, lt=0.5)

    # ── Experiments ─────────────────────────────────────────────────────────
    default_seed: int = 42
    default_samples: int = Field(default=10_000, ge=1)
    workers: int = Field(default=1, ge=1)

    # ── Schweizer–Sklar fitting ─────────────────────────────────────────────
    ss_search_lower: float = -1e4
    ss_search_upper: float = -0.1
    ss_search_tolerance: float = 1e-6

    # ── Evidential error ────────────────────────────────────────────────────
    ee_default_bound: int = Field(default=50, ge=0)

    # ── Logic ───────────────────────────────────────────────────────────────
    impl_variant: ImplVariant = ImplVariant.printed

    # ── Observability ───────────────────────────────────────────────────────
    log_level: str = "warning"
    log_format: LogFormat = LogFormat.console


@lru_cache
def get_settings() -> Settings:
    """Singleton settings instance (cached after first call)."""
    return Settings()
