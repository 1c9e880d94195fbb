"""
Runtime configuration using Pydantic Settings.

Values come from the environment (prefix `RGTEST_`) and an optional `.env` file.
Command-line flags take precedence over everything here.
"""

import os
from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Defaults for test runs, simulations and diagnostics.

    `threads=0` means "use every core"; `RGTEST_THREADS` is the fallback for
    `--threads`.
    """

    model_config = SettingsConfigDict(
        env_prefix="RGTEST_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Workers
    threads: int = Field(default=0, ge=0)

    # Test defaults (5-MST on L2 distances, W1 weights, 10,000 permutations)
    nperm: int = Field(default=10_000, ge=1)
    alpha: float = Field(default=0.05, gt=0.0, lt=1.0)
    seed: int = 1
    graph: Literal["kmst", "knn", "edgelist"] = "kmst"
    k: int = Field(default=5, ge=1)
    metric: Literal["l1", "l2"] = "l2"
    weight: Literal["w1", "w2", "w3", "none"] = "w1"

    # Guards / diagnostics
    exact_budget: int = Field(default=100_000, ge=1)
    lower_bound_warn: float = 0.5

    # Logging / errors
    log_level: str = "WARNING"
    expose_error_details: bool = True

    def resolved_threads(self) -> int:
        return self.threads or (os.cpu_count() or 1)


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Tests call `get_settings.cache_clear()` after changing the environment.
    """
    return Settings()
