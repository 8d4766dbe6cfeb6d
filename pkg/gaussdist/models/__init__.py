"""
Models package: symplectic matrices and Gaussian-state covariance matrices.
"""
from .gaussian_state import CovMatrix, ModeLayout, SymmetricStateParams
from .symplectic import EulerParams, SymplecticMatrix

__all__ = ["CovMatrix", "ModeLayout", "SymmetricStateParams", "EulerParams", "SymplecticMatrix"]
