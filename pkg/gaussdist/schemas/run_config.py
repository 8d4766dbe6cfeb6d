"""
Run Configuration Schema

Validated command-line configuration for one CLI invocation.
"""

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from gaussdist.models.gaussian_state import SymmetricStateParams


class Subcommand(str, Enum):
    EVAL = "eval"
    VERIFY = "verify"
    CHECK_LEMMAS = "check-lemmas"
    OPTIMIZE = "optimize"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """Parsed and validated flags"""

    subcommand: Subcommand
    a: Optional[float] = Field(None, description="Diagonal parameter a >= 1")
    c: Optional[float] = Field(None, description="Correlation parameter 0 <= c <= sqrt(a^2-1)")
    r: Optional[float] = Field(None, description="Two-mode squeezing; sets a=cosh 2r, c=sinh 2r")
    eta: Optional[float] = Field(None, ge=0.0, le=1.0, description="Transmissivity applied with --r")
    samples: int = Field(1, ge=1)
    trials: int = Field(1, ge=1)
    restarts: int = Field(1, ge=1)
    seed: int = Field(0, ge=0)
    squeeze_min: float = Field(..., gt=0.0)
    squeeze_max: float = Field(..., gt=0.0)
    out: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def validate_state_parameters(self):
        if self.squeeze_min > self.squeeze_max:
            raise ValueError("squeeze-min must not exceed squeeze-max")
        if self.eta is not None and self.r is None:
            raise ValueError("--eta requires --r")
        if self.subcommand in (Subcommand.EVAL, Subcommand.OPTIMIZE):
            if self.r is not None and (self.a is not None or self.c is not None):
                raise ValueError("give either --r or --a/--c, not both")
            if self.r is None and (self.a is None or self.c is None):
                raise ValueError("both --a and --c are required unless --r is given")
            # raises DomainError (a ValueError) naming the violated bound
            self.state_params()
        return self

    @property
    def squeeze_range(self) -> tuple[float, float]:
        return (self.squeeze_min, self.squeeze_max)

    def state_params(self) -> SymmetricStateParams:
        if self.r is not None:
            if self.eta is not None:
                return SymmetricStateParams.from_lossy_squeezing(self.r, self.eta)
            return SymmetricStateParams.from_squeezing(self.r)
        return SymmetricStateParams(self.a, self.c)
