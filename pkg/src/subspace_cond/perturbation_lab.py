"""Finite-difference verification of the closed-form condition number.

The quantities here are measured, not derived: the SVD of ``A + t*Adot`` is
recomputed from scratch, the selected subspace is read off at the same
positions, and the resulting subspace distance is divided by the size of
the perturbation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from subspace_cond.condition import PaddedSpectrum, kappa_formula
from subspace_cond.grassmann import DistanceKind, distance
from subspace_cond.linalg_core import (
    DEFAULT_RANK_RTOL,
    DEFAULT_TIE_TOL,
    Field,
    Matrix,
    MatrixLike,
    Selection,
    Side,
    SvdFactors,
    as_matrix,
    membership_check,
    min_gap_pair,
    subspace_of,
    svd_full,
)

DEFAULT_T_SCHEDULE = (1e-4, 1e-5, 1e-6)


class PerturbationError(ValueError):
    """The perturbed matrix cannot be tracked back to the same selected subspace."""


@dataclass(frozen=True)
class PerturbationDirection:
    Adot: Matrix
    label: Tuple = ("user",)

    def __post_init__(self):
        if self.Adot.fro_norm() == 0:
            raise ValueError("perturbation direction must be nonzero")

    def norm(self) -> float:
        return self.Adot.fro_norm()

    def normalized(self) -> "PerturbationDirection":
        return PerturbationDirection(self.Adot.scaled(1.0 / self.norm()), self.label)


@dataclass(frozen=True)
class ProbeConfig:
    """Settings for :func:`empirical_kappa`.

    ``t_schedule`` holds relative step sizes: a unit direction is scaled so
    that the perturbation has Frobenius norm ``t * scale`` with
    ``scale = min(||A||_F, gap)``, ``gap`` being the smallest singular value
    gap across the selection boundary.
    """

    num_random_dirs: int = 16
    t_schedule: Tuple[float, ...] = DEFAULT_T_SCHEDULE
    seed: int = 0
    kind: DistanceKind = DistanceKind.CHORDAL
    include_worst: bool = True

    def __post_init__(self):
        ts = tuple(float(t) for t in self.t_schedule)
        if not ts:
            raise ValueError("t_schedule must not be empty")
        if any(not 0 < t <= 1 for t in ts):
            raise ValueError("t_schedule entries must lie in (0, 1]")
        if any(b >= a for a, b in zip(ts, ts[1:])):
            raise ValueError("t_schedule must be strictly decreasing")
        if self.num_random_dirs < 0:
            raise ValueError("num_random_dirs must be nonnegative")
        object.__setattr__(self, "t_schedule", ts)
        object.__setattr__(self, "kind", DistanceKind(self.kind))


@dataclass(frozen=True)
class DirectionProbe:
    label: Tuple
    t_values: np.ndarray
    quotients: np.ndarray
    extrapolated: float


@dataclass(frozen=True)
class ProbeResult:
    """Finite-difference probe of the condition number.

    ``extrapolated`` is the max over all probed directions of the t -> 0
    extrapolation; ``random_max`` is the same max over random directions
    only, and ``worst`` the probe along the closed-form worst direction.
    """

    kind: DistanceKind
    t_values: np.ndarray
    quotients: np.ndarray
    extrapolated: float
    random_max: float
    worst: Optional[DirectionProbe] = None
    probes: List[DirectionProbe] = field(default_factory=list)


def worst_direction(svd: SvdFactors, i: int, j: int) -> PerturbationDirection:
    """Closed-form perturbation along which the selected subspace moves fastest.

    ``i`` is a selected and ``j`` an unselected index (1-based) realizing the
    condition number. The result is
    ``U (e_j e_i^T - e_i e_j^T) Sigma_hat V^H``, plus
    ``2 s_i s_j / (s_i^2 + s_j^2) U Sigma_hat (e_i e_j^T - e_j e_i^T) V^H``
    when both indices address nonzero singular values.
    """
    m, n, r = svd.m, svd.n, svd.rank
    if i == j:
        raise ValueError("worst direction needs two distinct indices")
    for idx in (i, j):
        if not 1 <= idx <= m:
            raise IndexError(f"index {idx} out of range 1..{m}")
    S = svd.sigma_hat()
    a, b = i - 1, j - 1
    rot_m = np.zeros((m, m))
    rot_m[b, a] = 1.0
    rot_m[a, b] = -1.0
    core = rot_m @ S
    if i <= r and j <= r:
        si, sj = svd.sigma[a], svd.sigma[b]
        rot_n = np.zeros((n, n))
        rot_n[a, b] = 1.0
        rot_n[b, a] = -1.0
        core = core + (2 * si * sj / (si * si + sj * sj)) * (S @ rot_n)
    Adot = svd.U @ core @ svd.V.conj().T
    fld = Field.COMPLEX if np.iscomplexobj(svd.U) else Field.REAL
    return PerturbationDirection(Matrix(Adot, fld), ("worst", i, j))


def _left(A: Matrix, sel: Selection) -> Tuple[Matrix, Selection]:
    """Reduce a right selection to a left one on A^H."""
    if sel.side is Side.RIGHT:
        return A.H, Selection(sel.indices, sel.ambient, Side.LEFT)
    return A, sel


def directional_quotient(A: MatrixLike, sel: Selection, direction: PerturbationDirection,
                         t: float, kind: DistanceKind = DistanceKind.CHORDAL,
                         tie_tol: float = DEFAULT_TIE_TOL,
                         rank_rtol: float = DEFAULT_RANK_RTOL) -> float:
    """``d(L(A), L(A + t Adot)) / (t ||Adot||_F)`` from two independent SVDs.

    Raises :class:`PerturbationError` when the step is large enough that a
    singular value could cross the selection boundary (by Weyl's bound,
    when the spectral norm of the step reaches half the boundary gap).
    """
    A = as_matrix(A)
    if t <= 0:
        raise ValueError("step t must be positive")
    Adot = direction.Adot
    if Adot.shape != A.shape:
        raise ValueError(f"direction shape {Adot.shape} != matrix shape {A.shape}")
    if sel.side is Side.RIGHT:
        Adot = Adot.H
    A, sel = _left(A, sel)

    svd0 = svd_full(A, rank_rtol)
    memb = membership_check(svd0, sel, tie_tol)
    if not memb.member:
        raise PerturbationError(f"selection splits a repeated singular value at {memb.witness}")
    step = Adot.scaled(t)
    step_norm = step.fro_norm()
    if sel.is_trivial():
        return 0.0
    gap, _ = min_gap_pair(svd0.sigma, sel)
    if np.linalg.norm(step.data, 2) >= 0.5 * gap:
        raise PerturbationError(
            f"step of spectral norm {np.linalg.norm(step.data, 2):.3g} may reorder singular values "
            f"across a gap of {gap:.3g}; use a smaller t")
    svd1 = svd_full(A + step, rank_rtol)
    if not membership_check(svd1, sel, tie_tol).member:
        raise PerturbationError("perturbed matrix splits a singular value; use a smaller t")
    d = distance(subspace_of(svd0, sel), subspace_of(svd1, sel), kind)
    return d / step_norm


def extrapolate_linear(t_values: Sequence[float], quotients: Sequence[float]) -> float:
    """Intercept of the least-squares line ``q0 + q1 t`` through the samples."""
    t = np.asarray(t_values, dtype=float)
    q = np.asarray(quotients, dtype=float)
    if len(t) == 1:
        return float(q[0])
    X = np.column_stack([np.ones_like(t), t])
    coef, *_ = np.linalg.lstsq(X, q, rcond=None)
    return float(coef[0])


def random_direction(shape: Tuple[int, int], fld: Field, seed: int, sample_id: int) -> PerturbationDirection:
    """Gaussian direction of unit Frobenius norm, reproducible per (seed, sample_id)."""
    rng = np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(sample_id)])
    X = rng.standard_normal(shape)
    if fld is Field.COMPLEX:
        X = X + 1j * rng.standard_normal(shape)
    X = X / np.linalg.norm(X)
    return PerturbationDirection(Matrix(X, fld), ("random", sample_id))


def probe_scale(A: Matrix, sel: Selection, tie_tol: float = DEFAULT_TIE_TOL,
                rank_rtol: float = DEFAULT_RANK_RTOL) -> float:
    """Reference step size: ``min(||A||_F, boundary gap)``, or 1 for A = 0."""
    A, sel = _left(A, sel)
    svd = svd_full(A, rank_rtol)
    gap, _ = min_gap_pair(svd.sigma, sel)
    scale = min(A.fro_norm(), gap)
    return scale if scale > 0 else 1.0


def probe_direction(A: Matrix, sel: Selection, direction: PerturbationDirection, cfg: ProbeConfig,
                    scale: float, tie_tol: float = DEFAULT_TIE_TOL,
                    rank_rtol: float = DEFAULT_RANK_RTOL) -> DirectionProbe:
    unit = direction.normalized()
    t_values = np.asarray(cfg.t_schedule) * scale
    q = np.array([directional_quotient(A, sel, unit, t, cfg.kind, tie_tol, rank_rtol)
                  for t in t_values])
    return DirectionProbe(direction.label, t_values, q, extrapolate_linear(t_values, q))


def empirical_kappa(A: MatrixLike, sel: Selection, cfg: ProbeConfig = ProbeConfig(),
                    tie_tol: float = DEFAULT_TIE_TOL,
                    rank_rtol: float = DEFAULT_RANK_RTOL) -> ProbeResult:
    """Monte-Carlo lower bound on the condition number, plus the worst direction.

    Every direction is probed over the whole step schedule and extrapolated
    to t -> 0. Without the worst direction the result is a lower bound; with
    it, the result matches the closed form up to the extrapolation error.
    """
    A = as_matrix(A)
    scale = probe_scale(A, sel, tie_tol, rank_rtol)
    probes = []
    for sid in range(cfg.num_random_dirs):
        direction = random_direction(A.shape, A.field, cfg.seed, sid)
        probes.append(probe_direction(A, sel, direction, cfg, scale, tie_tol, rank_rtol))
    random_max = max((p.extrapolated for p in probes), default=0.0)

    worst = None
    if cfg.include_worst:
        A_left, sel_left = _left(A, sel)
        svd = svd_full(A_left, rank_rtol)
        report = kappa_formula(PaddedSpectrum.from_svd(svd), sel_left, tie_tol)
        if not report.member:
            raise PerturbationError(f"selection splits a repeated singular value at {report.tie_pair}")
        if report.witness is not None:
            wd = worst_direction(svd, *report.witness)
            if sel.side is Side.RIGHT:
                wd = PerturbationDirection(wd.Adot.H, wd.label)
            worst = probe_direction(A, sel, wd, cfg, scale, tie_tol, rank_rtol)
            probes.append(worst)

    if probes:
        best = max(probes, key=lambda p: p.extrapolated)
        t_values, quotients, extrapolated = best.t_values, best.quotients, best.extrapolated
    else:
        t_values = np.asarray(cfg.t_schedule) * scale
        quotients = np.zeros(len(t_values))
        extrapolated = 0.0
    return ProbeResult(cfg.kind, t_values, quotients, max(extrapolated, 0.0), random_max, worst, probes)


def restrict_scalars(A: MatrixLike) -> Matrix:
    """Real 2m x 2n image ``[[Re A, Im A], [-Im A, Re A]]`` of a complex matrix."""
    A = as_matrix(A)
    if not A.is_complex:
        raise ValueError("restrict_scalars expects a complex matrix")
    re, im = A.data.real, A.data.imag
    return Matrix(np.block([[re, im], [-im, re]]), Field.REAL)
