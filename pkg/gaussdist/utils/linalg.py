"""
Small dense linear-algebra helpers shared by the state and measurement code.
"""
from typing import Sequence

import numpy as np
import scipy.linalg

from gaussdist.core.exceptions import DimensionError, NumericalError


def as_square(matrix, name: str = "matrix") -> np.ndarray:
    """Return ``matrix`` as a float array, raising DimensionError unless it is square."""
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square", shape=arr.shape)
    return arr


def as_even_square(matrix, name: str = "matrix") -> np.ndarray:
    """Return ``matrix`` as a float array of shape (2n, 2n)."""
    arr = as_square(matrix, name)
    if arr.shape[0] % 2 != 0 or arr.shape[0] == 0:
        raise DimensionError(f"{name} must have even, non-zero dimension", shape=arr.shape)
    return arr


def max_abs(matrix) -> float:
    """Max-abs entry norm."""
    arr = np.asarray(matrix)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def is_symmetric(matrix, tol: float) -> bool:
    return max_abs(np.asarray(matrix) - np.asarray(matrix).T) <= tol


def symmetrize(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    return 0.5 * (arr + arr.T)


def quadrature_indices(mode_indices: Sequence[int]) -> list[int]:
    """Row indices of the (X, P) pairs of the given modes in interleaved ordering."""
    rows: list[int] = []
    for k in mode_indices:
        rows.extend((2 * k, 2 * k + 1))
    return rows


def principal_submatrix(matrix, indices: Sequence[int]) -> np.ndarray:
    arr = np.asarray(matrix)
    idx = list(indices)
    return arr[np.ix_(idx, idx)]


def block_diag(*blocks) -> np.ndarray:
    return scipy.linalg.block_diag(*[np.asarray(b, dtype=float) for b in blocks])


def restricted_inverse(matrix, support: Sequence[int], rank_tol: float) -> np.ndarray:
    """
    Invert ``matrix`` on the coordinate subspace ``support`` and embed back with zeros.

    For a symmetric PSD matrix whose support is exactly ``support`` this is its
    Moore-Penrose inverse.

    Raises:
        NumericalError: if the restricted block is singular relative to ``rank_tol``
    """
    arr = as_square(matrix)
    idx = list(support)
    result = np.zeros_like(arr)
    if not idx:
        return result

    block = principal_submatrix(arr, idx)
    eigenvalues = np.linalg.eigvalsh(symmetrize(block))
    largest = float(np.max(np.abs(eigenvalues)))
    if largest == 0.0 or float(np.min(eigenvalues)) <= rank_tol * largest:
        raise NumericalError(
            "Restricted block is rank deficient",
            operation="restricted_inverse",
            min_eigenvalue=float(np.min(eigenvalues)),
            max_eigenvalue=largest,
        )

    inverse = scipy.linalg.solve(block, np.eye(len(idx)), assume_a="pos")
    result[np.ix_(idx, idx)] = symmetrize(inverse)
    return result
