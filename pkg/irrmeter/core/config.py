"""
Configuration settings for irrmeter.
"""

import logging

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    # Logging Configuration
    log_level: str = "WARNING"
    log_format: str = "json"

    # Precision Configuration (bits)
    default_precision_bits: int = 128
    min_precision_bits: int = 64
    max_precision_bits: int = 8192

    # Iteration caps
    poincare_scan_cap: int = 1_000_000
    series_max_terms: int = 200_000
    nmax_cap: int = 5_000

    # Verification and sweeps
    verify_nmax: int = 30
    default_seed: int = 0
    finite_n_probe: int = 60

    # Table computation
    table_workers: int = 1

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="IRRMETER_",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Validate that the log level names a stdlib level."""
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        """Validate the log renderer name."""
        if v not in ("json", "console"):
            raise ValueError("log_format must be 'json' or 'console'")
        return v

    @field_validator("default_precision_bits", "min_precision_bits", "max_precision_bits")
    @classmethod
    def validate_precision(cls, v):
        """Validate working precision."""
        if v < 64:
            raise ValueError("Precision must be at least 64 bits")
        return v

    @field_validator(
        "poincare_scan_cap", "series_max_terms", "nmax_cap", "verify_nmax", "finite_n_probe", "table_workers"
    )
    @classmethod
    def validate_positive(cls, v):
        """Validate caps and counts."""
        if v < 1:
            raise ValueError("Value must be positive")
        return v


# Global settings instance
settings = Settings()
