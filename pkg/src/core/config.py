"""Core configuration settings for the ILMSA planner.
Uses pydantic-settings to load configuration from environment variables.
"""
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings loaded from ILMSA_* environment variables."""

    # Application
    PROJECT_NAME: str = "ILMSA Planner"
    VERSION: str = "0.1.0"

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_JSON: bool = False

    # Plane sweep
    SWEEP_WORKERS: int = 1

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Accept any casing and reject unknown level names."""
        level = str(v).strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("SWEEP_WORKERS")
    @classmethod
    def positive_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("SWEEP_WORKERS must be at least 1")
        return v

    model_config = SettingsConfigDict(
        env_prefix="ILMSA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
