from __future__ import annotations

import functools
import logging
from typing import Optional

from pydantic import BaseSettings, Field, validator

EXPANSION_CONVENTIONS = ("binomial", "distinct")
OUTPUT_FORMATS = ("table", "json", "csv")


class Settings(BaseSettings):
    """Engine settings loaded from environment variables."""

    app_name: str = "relhilb"
    environment: str = Field("development", env="ENVIRONMENT")
    log_level: Optional[str] = Field(None, env="LOG_LEVEL")

    # Largest n accepted by enumeration and the CLI
    max_n: int = Field(10, env="RELHILB_MAX_N")
    rewrite_step_limit: int = Field(1_000_000, env="RELHILB_STEP_LIMIT")
    expansion_convention: str = Field("binomial", env="RELHILB_EXPANSION")

    # Series backing a table of rows 0..n are computed to order n + padding
    truncation_padding: int = Field(2, env="RELHILB_TRUNCATION_PADDING")
    default_format: str = Field("table", env="RELHILB_FORMAT")

    class Config:
        env_file = ".env"
        case_sensitive = False

    @validator("max_n", "rewrite_step_limit")
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be at least 1 (got {v})")
        return v

    @validator("truncation_padding")
    def _non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"must be non-negative (got {v})")
        return v

    @validator("expansion_convention", "default_format", pre=True)
    def _normalize_choice(cls, v: str) -> str:
        return str(v).strip().lower()

    @validator("expansion_convention")
    def _known_convention(cls, v: str) -> str:
        if v not in EXPANSION_CONVENTIONS:
            raise ValueError(
                f"unknown expansion convention {v!r}; expected one of {', '.join(EXPANSION_CONVENTIONS)}"
            )
        return v

    @validator("default_format")
    def _known_format(cls, v: str) -> str:
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"unknown output format {v!r}; expected one of {', '.join(OUTPUT_FORMATS)}")
        return v

    @validator("log_level")
    def _known_level(cls, v: Optional[str]) -> Optional[str]:
        if not v:
            return None
        level = v.strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {v!r}")
        return level


@functools.lru_cache()
def get_settings() -> Settings:
    return Settings()


__all__ = ["EXPANSION_CONVENTIONS", "OUTPUT_FORMATS", "Settings", "get_settings"]
