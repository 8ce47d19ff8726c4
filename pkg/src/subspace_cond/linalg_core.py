"""Dense matrices, full SVD, selection projectors and the membership test.

Indices handed to and returned from this module are 1-based, matching the
usual notation for selected singular values; conversion to numpy offsets
happens at the array boundary only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

DEFAULT_RANK_RTOL = 1e-12
DEFAULT_TIE_TOL = 1e-10


class Field(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class SvdError(ArithmeticError):
    """Raised when the SVD driver fails to converge."""


@dataclass(frozen=True)
class Matrix:
    """An m x n matrix over the reals or the complex numbers.

    The array is copied on construction and made read-only. Complex arrays
    whose imaginary part vanishes are kept complex: the field is a property
    of the problem (which perturbations are allowed), not of the entries.
    """

    data: np.ndarray
    field: Field = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        arr = np.array(self.data)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2-d array, got shape {arr.shape}")
        fld = self.field
        if fld is None:
            fld = Field.COMPLEX if np.iscomplexobj(arr) else Field.REAL
        fld = Field(fld)
        if fld is Field.REAL:
            if np.iscomplexobj(arr):
                if np.any(arr.imag != 0):
                    raise ValueError("complex entries in a matrix declared real")
                arr = arr.real
            arr = arr.astype(np.float64)
        else:
            arr = arr.astype(np.complex128)
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite (no NaN or Inf)")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "field", fld)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def is_complex(self) -> bool:
        return self.field is Field.COMPLEX

    @property
    def H(self) -> "Matrix":
        return Matrix(self.data.conj().T, self.field)

    def fro_norm(self) -> float:
        return float(np.linalg.norm(self.data, "fro"))

    def as_complex(self) -> "Matrix":
        return Matrix(self.data, Field.COMPLEX)

    def __add__(self, other: "Matrix") -> "Matrix":
        fld = Field.COMPLEX if Field.COMPLEX in (self.field, other.field) else Field.REAL
        return Matrix(self.data + other.data, fld)

    def scaled(self, t: float) -> "Matrix":
        return Matrix(t * self.data, self.field)


MatrixLike = Union[Matrix, np.ndarray, Sequence[Sequence[complex]]]


def as_matrix(a: MatrixLike) -> Matrix:
    return a if isinstance(a, Matrix) else Matrix(np.asarray(a))


@dataclass(frozen=True)
class Selection:
    """A sorted set of 1-based indices into the spectrum of one side.

    ``ambient`` is m for a left selection and n for a right one.
    """

    indices: Tuple[int, ...]
    ambient: int
    side: Side = Side.LEFT

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if self.ambient < 1:
            raise ValueError("ambient dimension must be positive")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate indices in selection {idx}")
        bad = [i for i in idx if not 1 <= i <= self.ambient]
        if bad:
            raise ValueError(f"indices {bad} out of range 1..{self.ambient}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))
        object.__setattr__(self, "side", Side(self.side))

    @classmethod
    def of(cls, indices: Iterable[int], ambient: int, side: Union[Side, str] = Side.LEFT) -> "Selection":
        return cls(tuple(indices), ambient, Side(side))

    @property
    def k(self) -> int:
        return len(self.indices)

    def complement(self) -> "Selection":
        chosen = set(self.indices)
        rest = tuple(i for i in range(1, self.ambient + 1) if i not in chosen)
        return Selection(rest, self.ambient, self.side)

    def offsets(self) -> np.ndarray:
        """0-based positions, for indexing numpy arrays."""
        return np.asarray(self.indices, dtype=int) - 1

    def is_trivial(self) -> bool:
        return self.k == 0 or self.k == self.ambient


@dataclass(frozen=True)
class SubspaceProjector:
    """Orthogonal projector P = Q Q^H representing a point of Gr(k, K^p)."""

    P: np.ndarray
    rank: int

    @property
    def dim_ambient(self) -> int:
        return self.P.shape[0]

    def complement(self) -> "SubspaceProjector":
        return SubspaceProjector(np.eye(self.dim_ambient, dtype=self.P.dtype) - self.P,
                                 self.dim_ambient - self.rank)

    def check(self, tol: float = 1e-10) -> None:
        """Raise ``ValueError`` unless P is Hermitian, idempotent and of trace ``rank``."""
        P = self.P
        if np.linalg.norm(P - P.conj().T) > tol:
            raise ValueError("projector is not Hermitian")
        if np.linalg.norm(P @ P - P) > tol:
            raise ValueError("projector is not idempotent")
        if abs(np.trace(P).real - self.rank) > tol:
            raise ValueError("projector trace does not match its rank")

    @classmethod
    def from_basis(cls, Q: np.ndarray) -> "SubspaceProjector":
        """Projector onto the span of the orthonormal columns of ``Q``."""
        Q = np.asarray(Q)
        return cls(Q @ Q.conj().T, Q.shape[1])


@dataclass(frozen=True)
class SvdFactors:
    """Full SVD ``A = U @ Sigma_hat @ V^H`` with the spectrum zero-padded to length m.

    ``V`` is stored (not ``V^H``). Singular values past the numerical rank
    are exactly zero.
    """

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    rank: int

    @property
    def m(self) -> int:
        return self.U.shape[0]

    @property
    def n(self) -> int:
        return self.V.shape[0]

    def sigma_hat(self) -> np.ndarray:
        """The m x n pseudo-diagonal matrix of singular values."""
        S = np.zeros((self.m, self.n))
        p = min(self.m, self.n)
        S[np.arange(p), np.arange(p)] = self.sigma[:p]
        return S

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.sigma_hat() @ self.V.conj().T


def _unit_phase(col: np.ndarray) -> complex:
    """Phase of the largest-modulus entry (first one on ties)."""
    k = int(np.argmax(np.abs(col)))
    z = col[k]
    return z / abs(z) if z != 0 else 1.0


def svd_full(a: MatrixLike, rank_rtol: float = DEFAULT_RANK_RTOL) -> SvdFactors:
    """Full SVD with a rank threshold and a deterministic sign/phase convention.

    Each singular vector pair is rotated so that the largest-modulus entry of
    the left vector is real and positive; columns spanning the kernel or
    cokernel are normalized on their own. This makes the factors of
    pseudo-diagonal matrices come out as (signed) identities, which the
    closed-form worst perturbation direction depends on for its sign.
    """
    A = as_matrix(a)
    if rank_rtol < 0:
        raise ValueError("rank_rtol must be nonnegative")
    m, n = A.shape
    p = min(m, n)
    dtype = np.complex128 if A.is_complex else np.float64
    try:
        U, s, Vh = np.linalg.svd(A.data, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD did not converge for a {m}x{n} matrix") from exc
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(U)) and np.all(np.isfinite(Vh))):
        raise SvdError("SVD returned non-finite factors")

    sigma = np.zeros(m)
    sigma[:p] = s
    if sigma[0] == 0.0:
        return SvdFactors(np.eye(m, dtype=dtype), sigma, np.eye(n, dtype=dtype), 0)
    r = int(np.count_nonzero(sigma > rank_rtol * sigma[0]))
    sigma[r:] = 0.0

    U = np.array(U, dtype=dtype)
    V = np.array(Vh.conj().T, dtype=dtype)
    for k in range(r):
        ph = _unit_phase(U[:, k])
        U[:, k] *= np.conj(ph)
        V[:, k] *= np.conj(ph)
    for k in range(r, m):
        U[:, k] *= np.conj(_unit_phase(U[:, k]))
    for k in range(r, n):
        V[:, k] *= np.conj(_unit_phase(V[:, k]))
    return SvdFactors(U, sigma, V, r)


def selection_projector(sel: Selection) -> SubspaceProjector:
    """Coordinate projector with ones on the diagonal at the selected positions."""
    d = np.zeros(sel.ambient)
    d[sel.offsets()] = 1.0
    return SubspaceProjector(np.diag(d), sel.k)


def subspace_basis(svd: SvdFactors, sel: Selection) -> np.ndarray:
    """Orthonormal basis (columns of U or V at the selected positions)."""
    if sel.side is Side.LEFT:
        Q, dim = svd.U, svd.m
    else:
        Q, dim = svd.V, svd.n
    if sel.ambient != dim:
        raise IndexError(f"{sel.side.value} selection has ambient {sel.ambient}, "
                         f"but the factor has {dim} columns")
    return Q[:, sel.offsets()]


def subspace_of(svd: SvdFactors, sel: Selection) -> SubspaceProjector:
    return SubspaceProjector.from_basis(subspace_basis(svd, sel))


def tie_scale(sigma: np.ndarray) -> float:
    s1 = float(sigma[0]) if len(sigma) else 0.0
    return s1 if s1 > 0 else 1.0


@dataclass(frozen=True)
class Membership:
    """Outcome of testing whether the selection is a singular subspace of A.

    ``witness`` is the (selected, unselected) pair with the smallest gap when
    the gap is inside the tie band; ``None`` for members.
    """

    member: bool
    witness: Optional[Tuple[int, int]] = None
    gap: float = float("inf")

    def __bool__(self) -> bool:
        return self.member


def min_gap_pair(sigma: np.ndarray, sel: Selection) -> Tuple[float, Optional[Tuple[int, int]]]:
    """Smallest |sigma_i - sigma_j| over i in sel, j outside it (lexicographic first on ties)."""
    sigma = np.asarray(sigma, dtype=float)
    comp = sel.complement()
    if sel.k == 0 or comp.k == 0:
        return float("inf"), None
    gaps = np.abs(sigma[sel.offsets()][:, None] - sigma[comp.offsets()][None, :])
    a, b = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    return float(gaps[a, b]), (sel.indices[a], comp.indices[b])


def membership_check(spectrum, sel: Selection, tie_tol: float = DEFAULT_TIE_TOL) -> Membership:
    """Decide whether ``sel`` splits a (numerically) repeated singular value.

    ``spectrum`` is an :class:`SvdFactors`, or any object with a ``sigma``
    attribute, or the zero-padded singular values themselves.
    """
    sigma = np.asarray(getattr(spectrum, "sigma", spectrum), dtype=float)
    if len(sigma) != sel.ambient:
        raise IndexError(f"spectrum has length {len(sigma)}, selection ambient is {sel.ambient}")
    gap, pair = min_gap_pair(sigma, sel)
    if pair is not None and gap <= tie_tol * tie_scale(sigma):
        return Membership(False, pair, gap)
    return Membership(True, None, gap)
