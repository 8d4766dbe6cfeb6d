"""Library configuration and settings."""

from typing import Literal

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical tolerances, sampling ranges and runtime options."""

    # Logging
    log_level: str = Field(default="INFO")
    log_format: Literal["console", "json"] = Field(default="console")

    # Tolerance ladder: algebraic identities, single Schur step, full pipeline, optimizer
    symplectic_tol: float = Field(default=1e-10)
    determinant_tol: float = Field(default=1e-8)
    symmetry_tol: float = Field(default=1e-12)
    uncertainty_floor: float = Field(default=1e-9)
    radicand_window: float = Field(default=1e-12)
    rank_tol: float = Field(default=1e-12)
    lemma3_rel_tol: float = Field(default=1e-6)
    lemma4_tol: float = Field(default=1e-8)
    lemma5_tol: float = Field(default=1e-10)
    chain_tol: float = Field(default=1e-9)
    theorem_tol: float = Field(default=1e-7)
    optimizer_tol: float = Field(default=1e-5)
    identity_exactness_tol: float = Field(default=1e-12)

    # Sampling
    squeeze_min: float = Field(default=0.2)
    squeeze_max: float = Field(default=5.0)
    a_min: float = Field(default=1.0)
    a_max: float = Field(default=5.0)
    thermal_nu_max: float = Field(default=5.0)

    # Optimizer
    optimizer_max_evaluations: int = Field(default=4000)
    optimizer_xatol: float = Field(default=1e-9)
    optimizer_fatol: float = Field(default=1e-12)

    # Concurrency
    max_workers: int = Field(default=1)

    @field_validator(
        "symplectic_tol",
        "determinant_tol",
        "symmetry_tol",
        "uncertainty_floor",
        "radicand_window",
        "rank_tol",
        "lemma3_rel_tol",
        "lemma4_tol",
        "lemma5_tol",
        "chain_tol",
        "theorem_tol",
        "optimizer_tol",
        "identity_exactness_tol",
        "optimizer_xatol",
        "optimizer_fatol",
    )
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("Tolerances must be strictly positive")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level '{v}'")
        return level

    @field_validator("max_workers", "optimizer_max_evaluations")
    @classmethod
    def validate_positive_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Counts must be at least 1")
        return v

    @model_validator(mode="after")
    def validate_ranges(self) -> "Settings":
        if self.squeeze_min <= 0.0:
            raise ValueError("squeeze_min must be strictly positive")
        if self.squeeze_min > self.squeeze_max:
            raise ValueError("squeeze_min must not exceed squeeze_max")
        if self.a_min < 1.0:
            raise ValueError("a_min must be at least 1 (vacuum bound)")
        if self.a_min > self.a_max:
            raise ValueError("a_min must not exceed a_max")
        if self.thermal_nu_max < 1.0:
            raise ValueError("thermal_nu_max must be at least 1")
        return self

    @property
    def squeeze_range(self) -> tuple[float, float]:
        return (self.squeeze_min, self.squeeze_max)

    @property
    def a_range(self) -> tuple[float, float]:
        return (self.a_min, self.a_max)

    model_config = SettingsConfigDict(
        env_prefix="GAUSSDIST_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


# Create global settings instance
settings = Settings()


def get_settings() -> Settings:
    """Get library settings."""
    return settings
