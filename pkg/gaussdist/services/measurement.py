"""
Gaussian measurements as covariance-matrix maps.

Covers projection onto a pure Gaussian state at finite squeezing and its ideal
homodyne limit. Post-measurement covariances do not depend on the measurement
outcome, so outcomes are never sampled.
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg
import structlog

from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DomainError, LayoutError, NumericalError
from gaussdist.models.gaussian_state import CovMatrix, ModeLayout, reorder_to
from gaussdist.utils.linalg import as_square, restricted_inverse, symmetrize

logger = structlog.get_logger(__name__)


class Quadrature(str, Enum):
    """Measured quadrature of one mode."""

    X = "X"
    P = "P"


@dataclass(frozen=True)
class ProjectionTarget:
    """
    Pure Gaussian state the measured modes are projected onto.

    With the default quadrature the per-mode block of D_d is diag(1/d, d). As
    d -> 0 the Schur shift D_d^2 leaves the P entry finite and sends the X entry
    to infinity, so the limit is a P-homodyne. ``Quadrature.X`` swaps the two
    entries and converges to an X-homodyne.
    """

    d: float
    quadrature: Quadrature = Quadrature.P

    def __post_init__(self):
        d = float(self.d)
        if not np.isfinite(d) or d <= 0.0:
            raise DomainError(f"d = {d}", field="d", value=d, bound="d > 0")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "quadrature", Quadrature(self.quadrature))

    def d_matrix(self, n_modes: int = 2) -> np.ndarray:
        """D_d for ``n_modes`` measured modes; a pure covariance, det = 1."""
        if self.quadrature is Quadrature.P:
            pair = [1.0 / self.d, self.d]
        else:
            pair = [self.d, 1.0 / self.d]
        return np.diag(pair * n_modes)

    def shift_matrix(self, n_modes: int = 2) -> np.ndarray:
        """D_d^2, the term added to the measured block."""
        d_matrix = self.d_matrix(n_modes)
        return d_matrix @ d_matrix


@dataclass(frozen=True)
class HomodyneMask:
    """One quadrature selector per measured mode."""

    quadratures: tuple[Quadrature, ...]

    def __post_init__(self):
        quads = tuple(Quadrature(q) for q in self.quadratures)
        if not quads:
            raise LayoutError("homodyne mask needs at least one mode", labels=quads)
        object.__setattr__(self, "quadratures", quads)

    @classmethod
    def all_x(cls, n_modes: int) -> "HomodyneMask":
        return cls((Quadrature.X,) * n_modes)

    @classmethod
    def all_p(cls, n_modes: int) -> "HomodyneMask":
        return cls((Quadrature.P,) * n_modes)

    def __len__(self) -> int:
        return len(self.quadratures)

    def support_indices(self) -> list[int]:
        """Rows of the measured block selected by the projector pi."""
        return [2 * k + (0 if q is Quadrature.X else 1) for k, q in enumerate(self.quadratures)]

    def projector(self) -> np.ndarray:
        """pi as a diagonal 0/1 matrix over the measured block."""
        diag = np.zeros(2 * len(self))
        diag[self.support_indices()] = 1.0
        return np.diag(diag)


class SchurBlocks(NamedTuple):
    """Blocks of a kept-first partition: C1 kept-kept, C2 measured-measured, C3 kept-measured."""

    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray


def _resolve_partition(
    gamma: CovMatrix, measured: Sequence[str], kept: Optional[Sequence[str]]
) -> tuple[list[str], list[str]]:
    measured = list(measured)
    if kept is None:
        kept = [label for label in gamma.labels if label not in measured]
    kept = list(kept)

    if not measured:
        raise LayoutError("at least one mode must be measured", labels=measured)
    if not kept:
        raise LayoutError("at least one mode must be kept", labels=kept)
    overlap = set(kept) & set(measured)
    if overlap:
        raise LayoutError(f"modes {sorted(overlap)} are both kept and measured", labels=sorted(overlap))
    if len(set(measured)) != len(measured) or len(set(kept)) != len(kept):
        raise LayoutError("mode subsets must not repeat labels", labels=kept + measured)
    if sorted(kept + measured) != sorted(gamma.labels):
        raise LayoutError(
            f"kept {kept} and measured {measured} do not cover modes {list(gamma.labels)}",
            labels=kept + measured,
        )
    return kept, measured


def _kept_first(gamma: CovMatrix, kept: list[str], measured: list[str]) -> tuple[CovMatrix, SchurBlocks]:
    ordered = reorder_to(gamma, kept + measured)
    split = 2 * len(kept)
    arr = ordered.entries
    return ordered, SchurBlocks(arr[:split, :split], arr[split:, split:], arr[:split, split:])


def block_split(
    gamma: CovMatrix, kept: Sequence[str], measured: Sequence[str]
) -> SchurBlocks:
    """
    Partition ``gamma`` into (C1, C2, C3) after reordering kept modes first.

    Raises:
        LayoutError: if the subsets overlap or do not cover every mode
    """
    kept, measured = _resolve_partition(gamma, measured, kept)
    return _kept_first(gamma, kept, measured)[1]


def project_pure_gaussian(
    gamma: CovMatrix,
    measured: Sequence[str],
    target: ProjectionTarget,
    kept: Optional[Sequence[str]] = None,
) -> CovMatrix:
    """
    Covariance after projecting ``measured`` onto the pure state of ``target``.

    M_d = C1 - C3 (C2 + D_d^2)^-1 C3^T, labelled by the kept modes.

    Raises:
        NumericalError: if C2 + D_d^2 is singular
    """
    kept, measured = _resolve_partition(gamma, measured, kept)
    _, blocks = _kept_first(gamma, kept, measured)
    shifted = blocks.c2 + target.shift_matrix(len(measured))
    try:
        gain = scipy.linalg.solve(shifted, blocks.c3.T, assume_a="pos")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(
            "measured block plus projection target is singular",
            operation="project_pure_gaussian",
            d=target.d,
        ) from exc
    return CovMatrix(symmetrize(blocks.c1 - blocks.c3 @ gain), ModeLayout(tuple(kept)))


def _resolve_mask(mask: Optional[HomodyneMask], n_measured: int) -> HomodyneMask:
    mask = HomodyneMask.all_x(n_measured) if mask is None else mask
    if len(mask) != n_measured:
        raise LayoutError(
            f"mask has {len(mask)} selectors for {n_measured} measured modes",
            labels=[q.value for q in mask.quadratures],
        )
    return mask


def homodyne(
    gamma: CovMatrix,
    measured: Sequence[str],
    mask: Optional[HomodyneMask] = None,
    kept: Optional[Sequence[str]] = None,
    rank_tol: Optional[float] = None,
) -> CovMatrix:
    """
    Covariance after ideal homodyne detection of ``measured``.

    Gamma'' = C1 - C3 (pi C2 pi)^MP C3^T, where the pseudoinverse is the inverse of
    C2 restricted to the masked quadratures, embedded back with zeros. The mask
    defaults to X on every measured mode.

    Raises:
        NumericalError: if the masked block is rank deficient beyond ``rank_tol``
    """
    rank_tol = get_settings().rank_tol if rank_tol is None else rank_tol
    kept, measured = _resolve_partition(gamma, measured, kept)
    mask = _resolve_mask(mask, len(measured))
    _, blocks = _kept_first(gamma, kept, measured)

    pinv = restricted_inverse(blocks.c2, mask.support_indices(), rank_tol)
    result = blocks.c1 - blocks.c3 @ pinv @ blocks.c3.T

    logger.debug(
        "Homodyne applied",
        kept=kept,
        measured=measured,
        quadratures=[q.value for q in mask.quadratures],
    )
    return CovMatrix(symmetrize(result), ModeLayout(tuple(kept)))


def mp_pseudoinverse(matrix, rank_tol: Optional[float] = None) -> np.ndarray:
    """
    Moore-Penrose inverse of a symmetric PSD matrix.

    Eigenvalues below ``rank_tol`` times the largest one count as zero, so the zero
    matrix maps to the zero matrix.
    """
    rank_tol = get_settings().rank_tol if rank_tol is None else rank_tol
    arr = symmetrize(as_square(matrix))
    return scipy.linalg.pinvh(arr, atol=0.0, rtol=rank_tol)


def extended_matrix(
    gamma: CovMatrix,
    measured: Sequence[str],
    target: ProjectionTarget,
    kept: Optional[Sequence[str]] = None,
) -> CovMatrix:
    """
    Kept-first Gamma with D_d^2 added to its measured block.

    Its determinant factors as det(M_d) * det(C2 + D_d^2).
    """
    kept, measured = _resolve_partition(gamma, measured, kept)
    ordered, _ = _kept_first(gamma, kept, measured)
    split = 2 * len(kept)
    entries = np.array(ordered.entries)
    entries[split:, split:] += target.shift_matrix(len(measured))
    return CovMatrix(entries, ordered.layout)


def homodyne_determinant(
    gamma: CovMatrix,
    measured: Sequence[str],
    mask: Optional[HomodyneMask] = None,
    kept: Optional[Sequence[str]] = None,
) -> float:
    """
    det Gamma'' computed as det Gamma[K u Q] / det Gamma[Q].

    K are the kept rows and Q the masked measured rows of the kept-first matrix.
    """
    kept, measured = _resolve_partition(gamma, measured, kept)
    mask = _resolve_mask(mask, len(measured))
    ordered, _ = _kept_first(gamma, kept, measured)
    split = 2 * len(kept)
    q_rows = [split + k for k in mask.support_indices()]
    rows = list(range(split)) + q_rows
    arr = ordered.entries

    denominator = float(np.linalg.det(arr[np.ix_(q_rows, q_rows)]))
    if denominator == 0.0:
        raise NumericalError(
            "masked measured block is singular", operation="homodyne_determinant"
        )
    return float(np.linalg.det(arr[np.ix_(rows, rows)])) / denominator
