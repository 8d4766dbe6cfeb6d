"""
Entanglement functionals of two-mode covariance matrices.

All quantities are built from the four local symplectic invariants
det(gamma_A), det(gamma_B), det(gamma_C) and det(gamma).
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import structlog

from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DimensionError, DomainError, NumericalError
from gaussdist.models.gaussian_state import CovMatrix, symplectic_eigenvalues
from gaussdist.utils.linalg import as_square

logger = structlog.get_logger(__name__)

TwoModeLike = Union[CovMatrix, np.ndarray]


@dataclass(frozen=True, eq=False)
class TwoModeBlocks:
    """gamma = [[gamma_A, gamma_C], [gamma_C^T, gamma_B]]"""

    gamma_a: np.ndarray
    gamma_b: np.ndarray
    gamma_c: np.ndarray

    @classmethod
    def from_cov(cls, gamma: TwoModeLike) -> "TwoModeBlocks":
        arr = gamma.entries if isinstance(gamma, CovMatrix) else as_square(gamma, "two-mode covariance")
        if arr.shape != (4, 4):
            raise DimensionError("two-mode functionals need a 4x4 matrix", shape=arr.shape, expected=(4, 4))
        return cls(arr[:2, :2], arr[2:, 2:], arr[:2, 2:])

    def reassemble(self) -> np.ndarray:
        return np.block([[self.gamma_a, self.gamma_c], [self.gamma_c.T, self.gamma_b]])

    @property
    def det_a(self) -> float:
        return float(np.linalg.det(self.gamma_a))

    @property
    def det_b(self) -> float:
        return float(np.linalg.det(self.gamma_b))

    @property
    def det_c(self) -> float:
        return float(np.linalg.det(self.gamma_c))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.reassemble()))

    @property
    def mean_local_det(self) -> float:
        """(det gamma_A + det gamma_B) / 2"""
        return 0.5 * (self.det_a + self.det_b)


def _roundoff_window(window: Optional[float]) -> float:
    return get_settings().radicand_window if window is None else window


def _clamped_sqrt(radicand: float, scale: float, operation: str, window: Optional[float]) -> float:
    """sqrt with any radicand inside ``±window * max(1, scale)`` treated as exactly zero."""
    bound = _roundoff_window(window) * max(1.0, scale)
    if abs(radicand) <= bound:
        return 0.0
    if radicand > 0.0:
        return math.sqrt(radicand)
    raise NumericalError(
        "negative radicand; input is not a valid covariance matrix",
        operation=operation,
        radicand=radicand,
    )



def f_value(gamma: TwoModeLike, window: Optional[float] = None) -> float:
    """
    f = x - sqrt(x^2 - det gamma), x = (det gamma_A + det gamma_B)/2 - det gamma_C.

    Evaluated as det gamma / (x + sqrt(x^2 - det gamma)) to avoid cancellation.
    """
    blocks = TwoModeBlocks.from_cov(gamma)
    x = blocks.mean_local_det - blocks.det_c
    det = blocks.det
    root = _clamped_sqrt(x * x - det, x * x, "f_value", window)
    denominator = x + root
    if denominator <= 0.0:
        raise NumericalError("f is undefined for this matrix", operation="f_value", x=x, det=det)
    return det / denominator


def log_negativity(gamma: TwoModeLike, window: Optional[float] = None) -> float:
    """E_N = -log2(f)/2 when f < 1, else 0. f within the roundoff window of 1 counts as 1."""
    f = f_value(gamma, window)
    if f >= 1.0 - _roundoff_window(window):
        return 0.0
    if f <= 0.0:
        raise NumericalError("f must be positive", operation="log_negativity", f=f)
    return -0.5 * math.log2(f)


def g_lower_bound(gamma: TwoModeLike, window: Optional[float] = None) -> float:
    """
    g = (sqrt(m) - sqrt(m - sqrt(det gamma)))^2 with m = (det gamma_A + det gamma_B)/2.

    Evaluated as (sqrt(det gamma) / (sqrt(m) + sqrt(m - sqrt(det gamma))))^2.
    """
    blocks = TwoModeBlocks.from_cov(gamma)
    m = blocks.mean_local_det
    if m <= 0.0:
        raise NumericalError("local determinants must be positive", operation="g_lower_bound", m=m)
    root_det = _clamped_sqrt(blocks.det, 1.0, "g_lower_bound", window)
    inner = _clamped_sqrt(m - root_det, m, "g_lower_bound", window)
    return (root_det / (math.sqrt(m) + inner)) ** 2


def monotone_h(x: float, y: float) -> float:
    """h(x) = (sqrt(x) - sqrt(x - y))^2, decreasing in x for fixed y > 0."""
    if y < 0.0:
        raise DomainError(f"y = {y}", field="y", value=y, bound="y >= 0")
    if x < y:
        raise DomainError(f"x = {x} < y = {y}", field="x", value=x, bound="x >= y")
    denominator = math.sqrt(x) + math.sqrt(x - y)
    if denominator == 0.0:
        return 0.0
    return (y / denominator) ** 2


def lemma5_discriminant(gamma: TwoModeLike) -> float:
    """[(det gamma_A + det gamma_B)/2 - |det gamma_C|]^2 - det gamma; non-negative on valid states."""
    blocks = TwoModeBlocks.from_cov(gamma)
    return (blocks.mean_local_det - abs(blocks.det_c)) ** 2 - blocks.det


def partial_transpose(gamma: CovMatrix) -> CovMatrix:
    """Partial transposition on the second mode: its P quadrature changes sign."""
    if gamma.n_modes != 2:
        raise DimensionError("partial transpose is defined here for two modes", shape=gamma.entries.shape)
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return CovMatrix(flip @ gamma.entries @ flip, gamma.layout)


def log_negativity_from_spectrum(gamma: CovMatrix, window: Optional[float] = None) -> float:
    """max(0, -log2 of the smallest symplectic eigenvalue of the partial transpose)."""
    nu_minus = float(symplectic_eigenvalues(partial_transpose(gamma))[0])
    if nu_minus >= 1.0 - _roundoff_window(window):
        return 0.0
    return -math.log2(nu_minus)
