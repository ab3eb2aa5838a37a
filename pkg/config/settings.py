"""Configuration: Environment-aware, validated, typed.

Rule: If it might change between environments, it belongs here.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """All configuration loaded from environment variables (prefix ``VOTING_``)."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="VOTING_",
        extra="ignore",  # Allow extra env vars without crashing
    )

    # === NUMERICS ===
    sum_tolerance: float = 1e-12
    grid_points: int = Field(default=10_000, ge=100, description="Grid for max/inequality checks")
    fd_step: float = 1e-5  # central differences for custom betrayal functions
    symmetry_tolerance: float = 1e-10
    qm_margin: float = 1e-9  # quasi-majority strict-inequality margin

    # === SPECTRAL ===
    spectral_tol: float = 1e-8
    spectral_max_iter: int = 100_000
    dense_limit: int = 2048
    large_method: Literal["power", "lanczos"] = "power"

    # === GENERATORS ===
    retry_budget: int = 100
    regular_method: Literal["pairing", "repair"] = "pairing"

    # === DYNAMICS ===
    max_steps_factor: int = 50  # max_steps = factor * ceil(log2 n)
    audit_every: int = 64
    pi_audit_tolerance: float = 1e-9

    # === PHASES ===
    phase_c1: float = 1.0
    phase_c3: float = 0.45
    bok_phase_c: float = 1.0

    # === CHECKS ===
    check_rel_tol: float = 1e-6
    check_abs_tol: float = 1e-12
    check_instances: int = 200
    check_master_seed: int = 20_240_601

    # === EXPERIMENTS ===
    workers: int = 1
    output_dir: str = "./runs"

    # === OBSERVABILITY ===
    log_level: str = "INFO"  # DEBUG for troubleshooting
    log_format: Literal["json", "console"] = "json"

    # === ENVIRONMENT ===
    environment: str = "development"  # development, ci, production


@lru_cache()
def get_settings() -> Settings:
    """Config loaded once, reused everywhere."""
    return Settings()


# Export for easy importing: from config.settings import settings
settings = get_settings()
