"""Gaussian distillation no-go toolkit

Covariance-matrix tools for Gaussian quantum states and a verification harness:
- Symplectic matrices, Euler parameterization and standard gates
- Covariance matrices, mode layouts and the symmetric two-copy input family
- Schur-complement measurements (finite squeezing and ideal homodyne)
- Log-negativity and its principal-submatrix lower bound
- Randomized sweeps and an optimizer searching for entanglement gain
"""

__version__ = "1.0.0"
