"""Runtime configuration loaded from environment variables."""

import os
import sys
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

_env_file = None
_env_file_override = os.environ.get("ANISONORM_ENV_FILE")
if _env_file_override is not None:
    _env_file = _env_file_override or None
elif "PYTEST_CURRENT_TEST" in os.environ or "pytest" in sys.modules:
    _env_file = None
else:
    _env_file = ".env"


class Settings(BaseSettings):
    """Toolkit configuration."""

    model_config = SettingsConfigDict(
        env_prefix="ANISONORM_",
        env_file=_env_file,
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_ignore_empty=True,
        extra="ignore",
    )

    # Execution
    threads: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Worker threads for p-grid scans (fallback for --threads).",
    )
    output_dir: str = Field(default="out", description="Default output directory.")

    # Numerics
    tolerance: float = Field(
        default=1e-7,
        gt=0.0,
        le=1e-2,
        description="Target quadrature tolerance per block application.",
    )
    admissibility_margin: float = Field(
        default=1e-9,
        ge=0.0,
        le=1e-2,
        description="Margin kept from open exponent-range endpoints.",
    )
    quadrature_order: int = Field(default=16, ge=4, le=64)
    quadrature_levels: int = Field(
        default=12,
        ge=2,
        le=40,
        description="Geometric grading levels toward each singular point.",
    )
    grading_ratio: float = Field(default=0.2, gt=0.0, lt=1.0)
    fourier_band: float = Field(
        default=48.0,
        gt=0.0,
        description="Output frequency cutoff for Fourier norms, in units of 1/support scale.",
    )

    # Sentry
    sentry_dsn: str | None = Field(default=None)
    sentry_environment: str | None = Field(
        default=None,
        description="Sentry environment (e.g., development, ci, production).",
    )
    sentry_release: str | None = Field(default=None)
    sentry_send_default_pii: bool = Field(default=False)
    sentry_traces_sample_rate: float | None = Field(default=None, ge=0.0, le=1.0)

    # Application
    environment: str = Field(default="development")
    debug: bool = False
    log_level: str = "INFO"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
