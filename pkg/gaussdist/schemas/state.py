"""
Covariance Matrix Schemas

JSON payload for CovMatrix serialization.
"""

from typing import List

from pydantic import BaseModel, Field, field_validator, model_validator


class CovMatrixPayload(BaseModel):
    """Serialized covariance matrix"""

    n_modes: int = Field(..., ge=1, description="Number of modes")
    layout: List[str] = Field(..., description="Mode labels in row-block order")
    entries: List[float] = Field(..., description="Row-major entries, (2n)^2 numbers")

    @field_validator("layout")
    @classmethod
    def validate_layout(cls, v):
        """Labels must be distinct"""
        if len(set(v)) != len(v):
            raise ValueError("layout labels must be distinct")
        return v

    @model_validator(mode="after")
    def validate_sizes(self):
        if len(self.layout) != self.n_modes:
            raise ValueError(f"layout has {len(self.layout)} labels for {self.n_modes} modes")
        if len(self.entries) != (2 * self.n_modes) ** 2:
            raise ValueError(f"expected {(2 * self.n_modes) ** 2} entries, got {len(self.entries)}")
        return self
