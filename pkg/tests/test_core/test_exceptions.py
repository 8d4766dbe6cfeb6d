"""
Tests for custom exception hierarchy.
"""
import pytest

from gaussdist.core.exceptions import (
    DimensionError,
    DomainError,
    GaussDistError,
    InvalidCovarianceError,
    LayoutError,
    NumericalError,
    ReportWriteError,
)


class TestGaussDistError:
    """Test base exception."""

    def test_basic_creation(self):
        """Test basic exception creation."""
        exc = GaussDistError("Test error", error_code="TEST_ERROR")

        assert exc.detail == "Test error"
        assert exc.error_code == "TEST_ERROR"
        assert exc.context == {}
        assert str(exc) == "Test error"

    def test_default_code(self):
        assert GaussDistError("x").error_code == "GD_000"

    def test_to_dict(self):
        """Test conversion to dictionary."""
        exc = GaussDistError("Test error", error_code="TEST_ERROR", context={"field": "test"})

        assert exc.to_dict() == {
            "error": True,
            "error_code": "TEST_ERROR",
            "message": "Test error",
            "context": {"field": "test"},
        }


class TestDomainError:
    """Test parameter range errors."""

    def test_names_field_and_bound(self):
        """Test message and code name the violated bound."""
        exc = DomainError("c = 2.0", field="c", value=2.0, bound="c <= sqrt(a^2 - 1)")

        assert exc.error_code == "GD_002_C"
        assert "Parameter 'c' out of range" in exc.detail
        assert "violated bound: c <= sqrt(a^2 - 1)" in exc.detail
        assert exc.context == {"field": "c", "value": 2.0, "bound": "c <= sqrt(a^2 - 1)"}

    def test_is_value_error(self):
        """Test DomainError can be caught as ValueError."""
        with pytest.raises(ValueError):
            raise DomainError("bad")


class TestOtherErrors:
    """Test remaining subclasses."""

    @pytest.mark.parametrize(
        "exc, code",
        [
            (DimensionError("odd", shape=(3, 3)), "GD_001"),
            (LayoutError("dup", labels=["A", "A"]), "GD_003"),
            (InvalidCovarianceError("bad", min_eigenvalue=-0.5), "GD_004"),
            (NumericalError("singular"), "GD_005"),
            (ReportWriteError("io", path="/x"), "GD_006"),
        ],
    )
    def test_codes(self, exc, code):
        assert exc.error_code == code
        assert isinstance(exc, GaussDistError)

    def test_numerical_error_operation_code(self):
        """Test the operation is folded into the code."""
        exc = NumericalError("singular", operation="restricted_inverse", min_eigenvalue=0.0)

        assert exc.error_code == "GD_005_RESTRICTED_INVERSE"
        assert exc.context["min_eigenvalue"] == 0.0

    def test_layout_error_is_value_error(self):
        assert isinstance(LayoutError("x"), ValueError)
