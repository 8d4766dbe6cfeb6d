"""
Real symplectic matrices: construction, validation, Euler parameterization and sampling.

All matrices use the mode-interleaved ordering (X1, P1, X2, P2, ...) with the
canonical form sigma = direct sum of [[0, 1], [-1, 0]] blocks.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DimensionError, DomainError
from gaussdist.utils.linalg import as_even_square, block_diag, max_abs
from gaussdist.utils.seeding import make_rng

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Canonical symplectic form for ``n_modes`` modes."""
    if n_modes < 1:
        raise DomainError("need at least one mode", field="n_modes", value=n_modes, bound="n >= 1")
    return np.kron(np.eye(n_modes), _J)


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """Element of Sp(2n, R); represents a Gaussian unitary."""

    entries: np.ndarray

    def __post_init__(self):
        arr = as_even_square(self.entries, "symplectic matrix").copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticMatrix":
        return cls(np.eye(2 * n_modes))

    @classmethod
    def from_array(cls, matrix, tol: Optional[float] = None) -> "SymplecticMatrix":
        """Wrap ``matrix`` after checking that it preserves the symplectic form."""
        candidate = cls(matrix)
        if not is_symplectic(candidate, tol):
            raise DomainError(
                f"defect {symplectic_defect(candidate):.3e}",
                field="S",
                bound="S sigma S^T = sigma",
            )
        return candidate

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        if other.n_modes != self.n_modes:
            raise DimensionError(
                "cannot compose symplectic matrices of different size",
                shape=other.entries.shape,
                expected=self.entries.shape,
            )
        return SymplecticMatrix(self.entries @ other.entries)

    @property
    def T(self) -> np.ndarray:
        return self.entries.T

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


MatrixLike = Union[SymplecticMatrix, np.ndarray, Sequence[Sequence[float]]]


def _entries(S: MatrixLike) -> np.ndarray:
    if isinstance(S, SymplecticMatrix):
        return S.entries
    return as_even_square(S, "symplectic matrix")


def symplectic_defect(S: MatrixLike) -> float:
    """max-abs(S sigma S^T - sigma)."""
    arr = _entries(S)
    sigma = symplectic_form(arr.shape[0] // 2)
    return max_abs(arr @ sigma @ arr.T - sigma)


def is_symplectic(S: MatrixLike, tol: Optional[float] = None) -> bool:
    """True iff S preserves the canonical form within ``tol`` in max-abs norm."""
    tol = get_settings().symplectic_tol if tol is None else tol
    return symplectic_defect(S) <= tol


def unitary_to_symplectic(unitary) -> np.ndarray:
    """
    Real representation of a passive (number-conserving) unitary.

    Each complex entry x + iy becomes the 2x2 block [[x, -y], [y, x]], so the
    result is orthogonal and symplectic whenever ``unitary`` is unitary.
    """
    u = np.asarray(unitary, dtype=complex)
    n = u.shape[0]
    out = np.empty((2 * n, 2 * n))
    out[0::2, 0::2] = u.real
    out[0::2, 1::2] = -u.imag
    out[1::2, 0::2] = u.imag
    out[1::2, 1::2] = u.real
    return out


def u2_unitary(params: Sequence[float]) -> np.ndarray:
    """
    2x2 unitary from (global phase, phase, mixing angle, relative phase).

    All-zero parameters give the identity.
    """
    if len(params) != 4:
        raise DimensionError("U(2) parameterization needs 4 numbers", shape=(len(params),), expected=4)
    alpha, beta, theta, gamma = (float(p) for p in params)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    su2 = np.array(
        [
            [np.exp(1j * beta) * cos_t, np.exp(1j * gamma) * sin_t],
            [-np.exp(-1j * gamma) * sin_t, np.exp(-1j * beta) * cos_t],
        ]
    )
    return np.exp(1j * alpha) * su2


def orthogonal_symplectic(params: Sequence[float]) -> SymplecticMatrix:
    """Element of Sp(4, R) intersected with SO(4), from a U(2) parameterization."""
    return SymplecticMatrix(unitary_to_symplectic(u2_unitary(params)))


@dataclass(frozen=True)
class EulerParams:
    """The ten real numbers of one party's transformation S = V D W."""

    left_orthogonal: tuple[float, float, float, float]
    squeezings: tuple[float, float]
    right_orthogonal: tuple[float, float, float, float]

    def __post_init__(self):
        left = tuple(float(x) for x in self.left_orthogonal)
        squeeze = tuple(float(x) for x in self.squeezings)
        right = tuple(float(x) for x in self.right_orthogonal)
        if len(left) != 4 or len(right) != 4:
            raise DimensionError("orthogonal factors need 4 parameters each", expected=4)
        if len(squeeze) != 2:
            raise DimensionError("Euler decomposition needs 2 squeezings", expected=2)
        for d in squeeze:
            if not (math.isfinite(d) and d > 0.0):
                raise DomainError(f"got {d}", field="squeezings", value=d, bound="d > 0")
        object.__setattr__(self, "left_orthogonal", left)
        object.__setattr__(self, "squeezings", squeeze)
        object.__setattr__(self, "right_orthogonal", right)

    @classmethod
    def identity(cls) -> "EulerParams":
        return cls((0.0, 0.0, 0.0, 0.0), (1.0, 1.0), (0.0, 0.0, 0.0, 0.0))

    def to_vector(self) -> np.ndarray:
        return np.array([*self.left_orthogonal, *self.squeezings, *self.right_orthogonal])

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "EulerParams":
        v = [float(x) for x in vector]
        if len(v) != 10:
            raise DimensionError("Euler parameter vector needs 10 numbers", shape=(len(v),), expected=10)
        return cls(tuple(v[0:4]), tuple(v[4:6]), tuple(v[6:10]))

    def to_search_vector(self) -> np.ndarray:
        """Unconstrained form: squeezings replaced by their logarithms."""
        v = self.to_vector()
        v[4:6] = np.log(v[4:6])
        return v

    @classmethod
    def from_search_vector(cls, vector: Sequence[float]) -> "EulerParams":
        v = np.array(vector, dtype=float)
        if v.shape != (10,):
            raise DimensionError("Euler search vector needs 10 numbers", shape=v.shape, expected=10)
        v[4:6] = np.exp(v[4:6])
        return cls.from_vector(v)


def euler_compose(p: EulerParams) -> SymplecticMatrix:
    """S = V D W with D = diag(d1, 1/d1, d2, 1/d2)."""
    d1, d2 = p.squeezings
    squeeze = np.diag([d1, 1.0 / d1, d2, 1.0 / d2])
    v = orthogonal_symplectic(p.left_orthogonal).entries
    w = orthogonal_symplectic(p.right_orthogonal).entries
    return SymplecticMatrix(v @ squeeze @ w)


def single_mode_squeezer(r: float) -> SymplecticMatrix:
    return SymplecticMatrix(np.diag([math.exp(-r), math.exp(r)]))


def two_mode_squeezer(r: float) -> SymplecticMatrix:
    """Two-mode squeezer; maps two vacua to the symmetric state with a=cosh 2r, c=sinh 2r."""
    ch, sh = math.cosh(r), math.sinh(r)
    z = np.diag([1.0, -1.0])
    eye = np.eye(2)
    return SymplecticMatrix(np.block([[ch * eye, sh * z], [sh * z, ch * eye]]))


def beam_splitter(theta: float) -> SymplecticMatrix:
    c, s = math.cos(theta), math.sin(theta)
    return SymplecticMatrix(unitary_to_symplectic(np.array([[c, s], [-s, c]])))


def phase_shift(phi: float) -> SymplecticMatrix:
    return SymplecticMatrix(unitary_to_symplectic(np.array([[np.exp(1j * phi)]])))


def symplectic_direct_sum(*blocks: SymplecticMatrix) -> SymplecticMatrix:
    if not blocks:
        raise DimensionError("direct sum needs at least one block")
    return SymplecticMatrix(block_diag(*[b.entries for b in blocks]))


def _validate_squeeze_range(squeeze_range: Sequence[float]) -> tuple[float, float]:
    if len(squeeze_range) != 2:
        raise DomainError("expected (min, max)", field="squeeze_range", value=tuple(squeeze_range))
    low, high = float(squeeze_range[0]), float(squeeze_range[1])
    if low <= 0.0:
        raise DomainError(f"got {low}", field="squeeze_range", value=(low, high), bound="min > 0")
    if low > high:
        raise DomainError(
            f"empty interval [{low}, {high}]",
            field="squeeze_range",
            value=(low, high),
            bound="min <= max",
        )
    return low, high


def sample_euler_params(
    rng: np.random.Generator, squeeze_range: Optional[Sequence[float]] = None
) -> EulerParams:
    """Angles uniform in [0, 2pi), squeezings log-uniform over ``squeeze_range``."""
    squeeze_range = get_settings().squeeze_range if squeeze_range is None else squeeze_range
    low, high = _validate_squeeze_range(squeeze_range)
    angles = rng.uniform(0.0, 2.0 * math.pi, size=8)
    log_d = rng.uniform(math.log(low), math.log(high), size=2)
    return EulerParams(tuple(angles[:4]), tuple(np.exp(log_d)), tuple(angles[4:]))


def random_symplectic(seed: int, squeeze_range: Optional[Sequence[float]] = None) -> SymplecticMatrix:
    """Deterministic random element of Sp(4, R) drawn through the Euler parameterization."""
    return euler_compose(sample_euler_params(make_rng(seed), squeeze_range))
