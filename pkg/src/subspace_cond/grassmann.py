"""Principal angles and the chordal, Grassmann and Procrustes distances."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from subspace_cond.linalg_core import SubspaceProjector

# Mismatch allowed between the two chordal evaluation paths before warning.
CHORDAL_CROSSCHECK_TOL = 1e-8


class DistanceKind(str, enum.Enum):
    CHORDAL = "chordal"
    GRASSMANN = "grassmann"
    PROCRUSTES = "procrustes"


@dataclass(frozen=True)
class PrincipalAngles:
    theta: np.ndarray

    def __len__(self):
        return len(self.theta)


def _check_pair(P: SubspaceProjector, Q: SubspaceProjector) -> None:
    if P.dim_ambient != Q.dim_ambient:
        raise ValueError(f"ambient dimensions differ: {P.dim_ambient} vs {Q.dim_ambient}")
    if P.rank != Q.rank:
        raise ValueError(f"subspace dimensions differ: {P.rank} vs {Q.rank}")


def projector_basis(P: SubspaceProjector) -> np.ndarray:
    """Orthonormal basis from the ``rank`` dominant eigenvectors of P."""
    if P.rank == 0:
        return np.zeros((P.dim_ambient, 0), dtype=P.P.dtype)
    H = 0.5 * (P.P + P.P.conj().T)
    _, vecs = np.linalg.eigh(H)
    return vecs[:, -P.rank:]


def principal_angles(P: SubspaceProjector, Q: SubspaceProjector) -> PrincipalAngles:
    """Principal angles between two subspaces of equal dimension, sorted nondecreasing.

    Cosines are the singular values of ``B_P^H B_Q`` and sines those of
    ``(I - Q) B_P``. Small angles are taken from the sines, large ones from
    the cosines, so neither end suffers the ~1e-8 floor of a bare arccos.
    """
    _check_pair(P, Q)
    k = P.rank
    if k == 0:
        return PrincipalAngles(np.zeros(0))
    Bp = projector_basis(P)
    Bq = projector_basis(Q)
    cos = np.clip(np.linalg.svd(Bp.conj().T @ Bq, compute_uv=False), 0.0, 1.0)
    # ascending sines pair with descending cosines
    sin = np.clip(np.linalg.svd(Bp - Bq @ (Bq.conj().T @ Bp), compute_uv=False)[::-1], 0.0, 1.0)
    theta = np.where(sin < np.sqrt(0.5), np.arcsin(sin), np.arccos(cos))
    return PrincipalAngles(np.sort(theta))


def chordal_from_projectors(P: SubspaceProjector, Q: SubspaceProjector) -> float:
    return float(np.linalg.norm(P.P - Q.P, "fro") / np.sqrt(2.0))


def distance(P: SubspaceProjector, Q: SubspaceProjector,
             kind: DistanceKind = DistanceKind.CHORDAL) -> float:
    """Distance between two points of the same Grassmannian.

    The chordal distance is evaluated from the projector difference and
    cross-checked against the norm of the sines of the principal angles.
    """
    kind = DistanceKind(kind)
    _check_pair(P, Q)
    theta = principal_angles(P, Q).theta
    if kind is DistanceKind.CHORDAL:
        d = chordal_from_projectors(P, Q)
        alt = float(np.linalg.norm(np.sin(theta)))
        if abs(d - alt) > CHORDAL_CROSSCHECK_TOL:
            warnings.warn(f"chordal distance paths disagree: {d!r} vs {alt!r}", RuntimeWarning)
        return d
    if kind is DistanceKind.GRASSMANN:
        return float(np.linalg.norm(theta))
    return float(np.linalg.norm(2.0 * np.sin(theta / 2.0)))


def max_distance(k: int, kind: DistanceKind) -> float:
    """Largest possible distance between two k-dimensional subspaces."""
    kind = DistanceKind(kind)
    if kind is DistanceKind.CHORDAL:
        return float(np.sqrt(k))
    if kind is DistanceKind.GRASSMANN:
        return float(np.pi / 2 * np.sqrt(k))
    return float(np.sqrt(2 * k))
