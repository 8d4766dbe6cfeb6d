"""
Custom exception classes for the Gaussian distillation toolkit.
"""
from typing import Any, Dict, Optional


class GaussDistError(Exception):
    """Base exception for toolkit errors."""

    default_code = "GD_000"

    def __init__(
        self,
        detail: str,
        error_code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        self.detail = detail
        self.error_code = error_code or self.default_code
        self.context = context or {}
        super().__init__(detail)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for structured logging and reports."""
        return {
            "error": True,
            "error_code": self.error_code,
            "message": self.detail,
            "context": self.context,
        }


class DimensionError(GaussDistError):
    """Exception for odd or mismatched matrix dimensions."""

    default_code = "GD_001"

    def __init__(self, detail: str, shape: Optional[tuple] = None, expected: Optional[Any] = None):
        super().__init__(
            detail=detail,
            context={"shape": shape, "expected": expected},
        )


class DomainError(GaussDistError, ValueError):
    """Exception for parameters outside their admissible range."""

    default_code = "GD_002"

    def __init__(
        self,
        detail: str,
        field: Optional[str] = None,
        value: Optional[Any] = None,
        bound: Optional[str] = None,
    ):
        error_code = self.default_code
        if field:
            error_code = f"{self.default_code}_{field.upper()}"
            detail = f"Parameter '{field}' out of range: {detail}"
        if bound:
            detail = f"{detail} (violated bound: {bound})"

        self.field = field
        self.value = value
        self.bound = bound
        super().__init__(
            detail=detail,
            error_code=error_code,
            context={"field": field, "value": value, "bound": bound},
        )


class LayoutError(GaussDistError, ValueError):
    """Exception for invalid mode labels, subsets and permutations."""

    default_code = "GD_003"

    def __init__(self, detail: str, labels: Optional[Any] = None):
        super().__init__(detail=detail, context={"labels": labels})


class InvalidCovarianceError(GaussDistError):
    """Exception for matrices violating symmetry or the uncertainty principle."""

    default_code = "GD_004"

    def __init__(self, detail: str, min_eigenvalue: Optional[float] = None, **context):
        super().__init__(
            detail=detail,
            context={"min_eigenvalue": min_eigenvalue, **context},
        )


class NumericalError(GaussDistError):
    """Exception for singular blocks, rank deficiency and invalid radicands."""

    default_code = "GD_005"

    def __init__(self, detail: str, operation: Optional[str] = None, **context):
        self.operation = operation
        error_code = self.default_code
        if operation:
            error_code = f"{self.default_code}_{operation.upper()}"
        super().__init__(
            detail=detail,
            error_code=error_code,
            context={"operation": operation, **context},
        )


class ReportWriteError(GaussDistError):
    """Exception for CSV/JSON emission failures."""

    default_code = "GD_006"

    def __init__(self, detail: str, path: Optional[str] = None):
        self.path = path
        super().__init__(detail=detail, context={"path": path})
