"""
Configuration management using Pydantic Settings
"""
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="VEE_INSIGHT_",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO")
    log_file: str = Field(default="")
    audit_log_file: str = Field(default="")
    log_format_json: bool = Field(default=False)

    # Randomness and sampling
    default_seed: int = Field(default=0)
    sample_points: int = Field(default=20, gt=0)
    sample_coordinate_bound: int = Field(default=9, gt=0)
    max_sampling_attempts: int = Field(default=100, gt=0)

    # Numeric tolerances (exact checks have none)
    mean_tolerance: float = Field(default=1e-9, gt=0)
    residual_tolerance: float = Field(default=1e-8, gt=0)
    agreement_tolerance: float = Field(default=1e-10, gt=0)

    # Loops
    default_grid: int = Field(default=64)
    loop_modes: int = Field(default=3, gt=0)
    loop_amplitude_fraction: float = Field(default=0.25, gt=0, lt=1)
    loop_count: int = Field(default=5, gt=0)

    # Hierarchy
    hierarchy_levels: int = Field(default=5, ge=0)
    hierarchy_coordinate_bound: int = Field(default=2, gt=0)

    # Output
    report_format: Literal["text", "json"] = Field(default="text")
    metrics_file: str = Field(default="")

    @field_validator("default_grid")
    @classmethod
    def grid_is_power_of_two(cls, value: int) -> int:
        if value < 8 or value & (value - 1):
            raise ValueError("default_grid must be a power of two >= 8")
        return value


# Global settings instance
settings = Settings()
