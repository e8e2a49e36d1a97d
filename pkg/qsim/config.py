"""Configuration management for the simulator."""

from enum import Enum

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Heuristic(str, Enum):
    MIN_FILL = "min_fill"
    MIN_DEGREE = "min_degree"


class Settings(BaseSettings):
    """Main configuration loaded from QSIM_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="QSIM_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Default seed for the random circuit generator
    seed: int = Field(default=0)

    # Ordering
    heuristic: Heuristic = Field(default=Heuristic.MIN_FILL)
    exhaustive_limit: int = Field(default=12, ge=0, le=12)  # Exact search up to 12 vertices

    @field_validator("heuristic", mode="before")
    @classmethod
    def parse_heuristic(cls, v):
        if isinstance(v, str):
            v = v.lower().strip().replace("-", "_")
            if v == "min_fill":
                return Heuristic.MIN_FILL
            elif v == "min_degree":
                return Heuristic.MIN_DEGREE
        return v

    # Oracle cross-checks
    oracle_max_qubits: int = Field(default=20)
    oracle_tolerance: float = Field(default=1e-8)

    # Sweeps
    report_workers: int = Field(default=4, ge=1)

    log_level: str = Field(default="WARNING")


def get_settings() -> Settings:
    """Get a settings instance from the current environment."""
    return Settings()
