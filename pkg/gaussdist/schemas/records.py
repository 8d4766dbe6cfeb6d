"""
Result Schemas

Pydantic models for sweep records, summaries, lemma reports and optimizer reports.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

# CSV header, in column order
CSV_COLUMNS = (
    "seed",
    "a",
    "c",
    "en_initial",
    "en_final",
    "det_final",
    "det_a",
    "det_b",
    "f_final",
    "g_final",
    "margin",
)


class SweepRecord(BaseModel):
    """One protocol trial"""

    seed: int = Field(..., description="Per-trial seed")
    a: float = Field(..., ge=1.0, description="Diagonal parameter of the input state")
    c: float = Field(..., ge=0.0, description="Correlation parameter of the input state")
    en_initial: float = Field(..., ge=0.0, description="Log-negativity of one input copy")
    en_final: float = Field(..., ge=0.0, description="Log-negativity after the protocol")
    det_final: float = Field(..., description="Determinant of the post-measurement matrix")
    det_a: float = Field(..., description="Determinant of the A1 block after measurement")
    det_b: float = Field(..., description="Determinant of the B1 block after measurement")
    f_final: float = Field(..., description="f of the post-measurement matrix")
    g_final: float = Field(..., description="g of the post-measurement matrix")
    margin: float = Field(..., description="en_final - en_initial")
    final_entangled: bool = Field(..., description="True when en_final > 0")
    chain_slack: float = Field(
        ..., description="Smallest slack along f(final) >= g(final) >= g(initial) = f(initial)"
    )
    converged: Optional[bool] = Field(None, description="Optimizer convergence flag")

    def csv_row(self) -> Dict[str, Any]:
        return {column: getattr(self, column) for column in CSV_COLUMNS}


class SweepSummary(BaseModel):
    """Sweep outcome as emitted in JSON"""

    model_config = ConfigDict(populate_by_name=True)

    trials: int = Field(..., ge=0, description="Number of trials")
    max_margin: float = Field(..., description="Largest en_final - en_initial")
    passed: bool = Field(..., alias="pass", description="max_margin <= tolerance")
    tolerance: float = Field(..., gt=0.0, description="Theorem tolerance")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True)


class LemmaReport(BaseModel):
    """Randomized check of one determinant identity or inequality"""

    lemma: str = Field(..., description="Check name")
    statistic: str = Field(..., description="What max_deviation measures")
    trials: int = Field(..., ge=1)
    max_deviation: float = Field(..., ge=0.0, description="Worst deviation over all trials")
    tolerance: float = Field(..., gt=0.0)
    passed: bool
    details: Dict[str, float] = Field(default_factory=dict, description="Auxiliary statistics")


class OptimizationReport(BaseModel):
    """Best protocol found by the optimizer"""

    a: float
    c: float
    restarts: int = Field(..., ge=1)
    seed: int
    record: SweepRecord
    euler_a: List[float] = Field(..., min_length=10, max_length=10)
    euler_b: List[float] = Field(..., min_length=10, max_length=10)
    converged: bool
    evaluations: int = Field(..., ge=0)
    best_restart: int = Field(..., ge=0, description="Restart index of the best run; 0 is the identity start")
    tolerance: float = Field(..., gt=0.0)
    passed: bool

    @computed_field
    @property
    def parameters(self) -> List[float]:
        """All 20 Euler parameters, party A first."""
        return [*self.euler_a, *self.euler_b]

    @property
    def best_margin(self) -> float:
        return self.record.margin
