"""
Covariance-matrix representation of Gaussian states.

Vacuum has covariance identity; rows are mode-interleaved (X1, P1, X2, P2, ...)
and every CovMatrix carries a ModeLayout naming its modes in row order.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from gaussdist.core.config import get_settings
from gaussdist.core.exceptions import DimensionError, DomainError, InvalidCovarianceError, LayoutError
from gaussdist.models.symplectic import SymplecticMatrix, symplectic_form, two_mode_squeezer
from gaussdist.schemas.state import CovMatrixPayload
from gaussdist.utils.linalg import (
    as_even_square,
    block_diag,
    is_symmetric,
    max_abs,
    principal_submatrix,
    quadrature_indices,
    symmetrize,
)

# Copy order of the two-copy input (ρ ⊗_{1,2} ρ) and party order (A | B)
COPY_ORDER = ("A1", "B1", "A2", "B2")
PARTY_ORDER = ("A1", "A2", "B1", "B2")


@dataclass(frozen=True)
class ModeLayout:
    """Ordered mode labels; label k names rows 2k and 2k+1."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if not labels:
            raise LayoutError("layout needs at least one mode", labels=labels)
        if len(set(labels)) != len(labels):
            raise LayoutError("mode labels must be distinct", labels=labels)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def default(cls, n_modes: int) -> "ModeLayout":
        return cls(tuple(f"m{k}" for k in range(n_modes)))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown mode '{label}'", labels=self.labels) from None

    def indices(self, labels: Sequence[str]) -> list[int]:
        return [self.index(label) for label in labels]

    def permuted(self, perm: Sequence[int]) -> "ModeLayout":
        return ModeLayout(tuple(self.labels[k] for k in perm))

    def __add__(self, other: "ModeLayout") -> "ModeLayout":
        return ModeLayout(self.labels + other.labels)


LayoutLike = Union[ModeLayout, Sequence[str]]


def _as_layout(layout: Optional[LayoutLike], n_modes: int) -> ModeLayout:
    if layout is None:
        return ModeLayout.default(n_modes)
    if isinstance(layout, ModeLayout):
        return layout
    return ModeLayout(tuple(layout))


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Real symmetric 2n x 2n second-moment matrix with its mode layout."""

    entries: np.ndarray
    layout: ModeLayout

    def __post_init__(self):
        arr = as_even_square(self.entries, "covariance matrix").copy()
        arr.setflags(write=False)
        layout = _as_layout(self.layout, arr.shape[0] // 2)
        if len(layout) != arr.shape[0] // 2:
            raise LayoutError(
                f"layout has {len(layout)} labels for {arr.shape[0] // 2} modes",
                labels=layout.labels,
            )
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "layout", layout)

    @classmethod
    def from_array(cls, matrix, layout: Optional[LayoutLike] = None) -> "CovMatrix":
        arr = as_even_square(matrix, "covariance matrix")
        return cls(arr, _as_layout(layout, arr.shape[0] // 2))

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    def det(self) -> float:
        return float(np.linalg.det(self.entries))

    def block(self, rows: Sequence[str], cols: Optional[Sequence[str]] = None) -> np.ndarray:
        """Sub-block between the quadratures of the ``rows`` and ``cols`` modes."""
        r = quadrature_indices(self.layout.indices(rows))
        c = r if cols is None else quadrature_indices(self.layout.indices(cols))
        return self.entries[np.ix_(r, c)]

    def validate(self, tol: Optional[float] = None) -> "CovMatrix":
        """Raise InvalidCovarianceError unless this matrix is a valid covariance."""
        cfg = get_settings()
        if not is_symmetric(self.entries, cfg.symmetry_tol):
            raise InvalidCovarianceError(
                "covariance matrix is not symmetric",
                asymmetry=max_abs(self.entries - self.entries.T),
            )
        floor = cfg.uncertainty_floor if tol is None else tol
        lowest = uncertainty_min_eigenvalue(self.entries)
        if lowest < -floor:
            raise InvalidCovarianceError(
                "covariance matrix violates the uncertainty principle",
                min_eigenvalue=lowest,
            )
        return self

    def to_payload(self) -> CovMatrixPayload:
        return CovMatrixPayload(
            n_modes=self.n_modes,
            layout=list(self.labels),
            entries=[float(x) for x in self.entries.ravel()],
        )

    def to_json(self) -> str:
        return self.to_payload().model_dump_json()

    @classmethod
    def from_payload(cls, payload: CovMatrixPayload) -> "CovMatrix":
        dim = 2 * payload.n_modes
        if len(payload.entries) != dim * dim:
            raise DimensionError(
                "entries do not match n_modes",
                shape=(len(payload.entries),),
                expected=dim * dim,
            )
        return cls(np.array(payload.entries, dtype=float).reshape(dim, dim), ModeLayout(tuple(payload.layout)))

    @classmethod
    def from_json(cls, text: str) -> "CovMatrix":
        return cls.from_payload(CovMatrixPayload.model_validate_json(text))


@dataclass(frozen=True)
class SymmetricStateParams:
    """Parameters (a, c) of the symmetric two-mode input family."""

    a: float
    c: float

    def __post_init__(self):
        a, c = float(self.a), float(self.c)
        if not math.isfinite(a) or a < 1.0:
            raise DomainError(f"a = {a}", field="a", value=a, bound="a >= 1")
        if not math.isfinite(c) or c < 0.0:
            raise DomainError(f"c = {c}", field="c", value=c, bound="c >= 0")
        # the pure-state edge c = sqrt(a^2 - 1) is admissible up to roundoff
        if c * c - (a - 1.0) * (a + 1.0) > 1e-12 * a * a:
            raise DomainError(
                f"c = {c} exceeds {math.sqrt(a * a - 1.0)}",
                field="c",
                value=c,
                bound="c <= sqrt(a^2 - 1)",
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_squeezing(cls, r: float) -> "SymmetricStateParams":
        """Two-mode squeezed vacuum: a = cosh 2r, c = sinh 2r."""
        return cls(math.cosh(2.0 * r), abs(math.sinh(2.0 * r)))

    @classmethod
    def from_lossy_squeezing(cls, r: float, eta: float) -> "SymmetricStateParams":
        """Both halves of a two-mode squeezed vacuum sent through equal pure loss."""
        if not 0.0 <= eta <= 1.0:
            raise DomainError(f"eta = {eta}", field="eta", value=eta, bound="0 <= eta <= 1")
        return cls(eta * math.cosh(2.0 * r) + 1.0 - eta, eta * abs(math.sinh(2.0 * r)))

    @property
    def is_pure(self) -> bool:
        return abs(self.a * self.a - self.c * self.c - 1.0) <= 1e-9 * self.a * self.a

    @property
    def determinant(self) -> float:
        return (self.a * self.a - self.c * self.c) ** 2


def two_mode_symmetric(p: SymmetricStateParams, layout: Optional[LayoutLike] = None) -> CovMatrix:
    """Covariance matrix of the symmetric input state, modes ordered (A, B)."""
    a, c = p.a, p.c
    entries = np.array(
        [
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, a, 0.0],
            [0.0, -c, 0.0, a],
        ]
    )
    return CovMatrix(entries, _as_layout(layout or ("A", "B"), 2))


def vacuum(layout: LayoutLike) -> CovMatrix:
    layout = _as_layout(layout, len(layout))
    return CovMatrix(np.eye(2 * len(layout)), layout)


def williamson_state(nus: Sequence[float], layout: Optional[LayoutLike] = None) -> CovMatrix:
    """Thermal normal form: direct sum of nu_k * identity(2), each nu_k >= 1."""
    for nu in nus:
        if nu < 1.0:
            raise DomainError(f"nu = {nu}", field="nu", value=nu, bound="nu >= 1")
    entries = np.diag(np.repeat(np.asarray(nus, dtype=float), 2))
    return CovMatrix(entries, _as_layout(layout, len(nus)))


def two_mode_squeezed_vacuum(r: float, layout: Optional[LayoutLike] = None) -> CovMatrix:
    return apply_symplectic(vacuum(layout or ("A", "B")), two_mode_squeezer(r))


def uncertainty_min_eigenvalue(matrix) -> float:
    """Smallest eigenvalue of the Hermitian matrix Gamma + i sigma."""
    arr = np.asarray(matrix, dtype=float)
    sigma = symplectic_form(arr.shape[0] // 2)
    return float(np.min(np.linalg.eigvalsh(symmetrize(arr) + 1j * sigma)))


def is_valid_covariance(gamma: Union[CovMatrix, np.ndarray], tol: Optional[float] = None) -> bool:
    """Symmetric within 1e-12 and Gamma + i sigma >= -tol."""
    cfg = get_settings()
    arr = gamma.entries if isinstance(gamma, CovMatrix) else as_even_square(gamma, "covariance matrix")
    if not is_symmetric(arr, cfg.symmetry_tol):
        return False
    floor = cfg.uncertainty_floor if tol is None else tol
    return uncertainty_min_eigenvalue(arr) >= -floor


def direct_sum(g1: CovMatrix, g2: CovMatrix, layout: Optional[LayoutLike] = None) -> CovMatrix:
    """Block-diagonal combination; ``layout`` names the combined modes (defaults to g1 + g2 labels)."""
    n_modes = g1.n_modes + g2.n_modes
    combined = g1.layout + g2.layout if layout is None else _as_layout(layout, n_modes)
    if len(combined) != n_modes:
        raise LayoutError(
            f"layout has {len(combined)} labels for {n_modes} modes", labels=combined.labels
        )
    return CovMatrix(block_diag(g1.entries, g2.entries), combined)


def _check_permutation(perm: Sequence[int], n_modes: int) -> list[int]:
    p = [int(k) for k in perm]
    if sorted(p) != list(range(n_modes)):
        raise LayoutError(f"{p} is not a permutation of {n_modes} modes", labels=p)
    return p


def reorder_modes(gamma: CovMatrix, perm: Sequence[int]) -> CovMatrix:
    """New mode k is old mode perm[k]; rows and columns move in 2x2 blocks."""
    p = _check_permutation(perm, gamma.n_modes)
    rows = quadrature_indices(p)
    return CovMatrix(gamma.entries[np.ix_(rows, rows)], gamma.layout.permuted(p))


def reorder_to(gamma: CovMatrix, labels: Sequence[str]) -> CovMatrix:
    """Reorder so that modes appear in the order given by ``labels``."""
    if sorted(labels) != sorted(gamma.labels):
        raise LayoutError(
            f"{list(labels)} does not list the modes {list(gamma.labels)}", labels=list(labels)
        )
    return reorder_modes(gamma, gamma.layout.indices(labels))


def inverse_permutation(perm: Sequence[int]) -> list[int]:
    inverse = [0] * len(perm)
    for position, k in enumerate(perm):
        inverse[k] = position
    return inverse


def apply_symplectic(gamma: CovMatrix, S: SymplecticMatrix) -> CovMatrix:
    """Gamma -> S Gamma S^T."""
    if S.n_modes != gamma.n_modes:
        raise DimensionError(
            "symplectic and covariance dimensions differ",
            shape=S.entries.shape,
            expected=gamma.entries.shape,
        )
    return CovMatrix(symmetrize(S.entries @ gamma.entries @ S.entries.T), gamma.layout)


def partial_trace(gamma: CovMatrix, keep: Sequence[str]) -> CovMatrix:
    """Principal submatrix on the kept modes, in the order given."""
    keep = list(keep)
    if not keep:
        raise LayoutError("partial trace must keep at least one mode", labels=keep)
    if len(set(keep)) != len(keep):
        raise LayoutError("kept modes must be distinct", labels=keep)
    rows = quadrature_indices(gamma.layout.indices(keep))
    return CovMatrix(principal_submatrix(gamma.entries, rows), ModeLayout(tuple(keep)))


def pure_loss(gamma: CovMatrix, eta: float, modes: Sequence[str]) -> CovMatrix:
    """Pure-loss channel of transmissivity ``eta`` on ``modes``: X Gamma X + Y with X = sqrt(eta) 1."""
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"eta = {eta}", field="eta", value=eta, bound="0 <= eta <= 1")
    scale = np.ones(2 * gamma.n_modes)
    noise = np.zeros(2 * gamma.n_modes)
    for row in quadrature_indices(gamma.layout.indices(modes)):
        scale[row] = math.sqrt(eta)
        noise[row] = 1.0 - eta
    entries = scale[:, None] * gamma.entries * scale[None, :] + np.diag(noise)
    return CovMatrix(entries, gamma.layout)


def symplectic_eigenvalues(gamma: Union[CovMatrix, np.ndarray]) -> np.ndarray:
    """Williamson spectrum, ascending, one value per mode."""
    arr = gamma.entries if isinstance(gamma, CovMatrix) else as_even_square(gamma, "covariance matrix")
    sigma = symplectic_form(arr.shape[0] // 2)
    moduli = np.sort(np.abs(np.linalg.eigvals(1j * sigma @ arr)))
    # eigenvalues come in +/- pairs
    return moduli[::2]


def is_pure(gamma: CovMatrix, tol: Optional[float] = None) -> bool:
    tol = get_settings().determinant_tol if tol is None else tol
    return abs(gamma.det() - 1.0) <= tol
