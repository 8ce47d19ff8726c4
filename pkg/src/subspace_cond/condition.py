"""Closed-form condition number of singular subspaces and its diagonal-operator oracle."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from subspace_cond.grassmann import DistanceKind, max_distance
from subspace_cond.linalg_core import (
    DEFAULT_RANK_RTOL,
    DEFAULT_TIE_TOL,
    MatrixLike,
    Selection,
    Side,
    SvdFactors,
    as_matrix,
    membership_check,
    svd_full,
)

INF = float("inf")


@dataclass(frozen=True)
class PaddedSpectrum:
    """Singular values padded with zeros to the length of the selection side."""

    sigma: np.ndarray
    m: int
    n: int
    r: int

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        if s.ndim != 1 or len(s) != self.m:
            raise ValueError(f"spectrum must have length m={self.m}")
        if np.any(s < 0) or np.any(np.diff(s) > 0):
            raise ValueError("spectrum must be nonnegative and nonincreasing")
        if np.any(s[self.r:] != 0) or np.any(s[:self.r] == 0):
            raise ValueError("spectrum must have exactly r nonzero leading entries")
        object.__setattr__(self, "sigma", s)

    @classmethod
    def from_svd(cls, svd: SvdFactors) -> "PaddedSpectrum":
        return cls(svd.sigma, svd.m, svd.n, svd.rank)

    @classmethod
    def from_values(cls, values, m: Optional[int] = None, n: Optional[int] = None) -> "PaddedSpectrum":
        """Build from the nonzero singular values of an m x n matrix (defaults: square)."""
        vals = np.sort(np.asarray(values, dtype=float))[::-1]
        m = len(vals) if m is None else m
        n = m if n is None else n
        if len(vals) > min(m, n):
            raise ValueError("more singular values than min(m, n)")
        sigma = np.zeros(m)
        sigma[:len(vals)] = vals
        return cls(sigma, m, n, int(np.count_nonzero(sigma)))


@dataclass(frozen=True)
class ConditionReport:
    """Condition number of one selected singular subspace.

    ``kappa`` is the verdict: +inf whenever the selection splits a singular
    value within the tie band. ``raw_kappa`` is the formula evaluated on the
    raw singular values; it differs from ``kappa`` only for near ties, which
    are flagged by ``near_tie``.
    """

    kappa: float
    raw_kappa: float
    witness: Optional[Tuple[int, int]]
    member: bool
    side: Side
    k: int
    tie_pair: Optional[Tuple[int, int]] = None
    mu: Optional[float] = None

    @property
    def near_tie(self) -> bool:
        return not self.member and np.isfinite(self.raw_kappa)

    @property
    def finite(self) -> bool:
        return bool(np.isfinite(self.kappa))


def pair_condition(si, sj):
    """The per-pair factor ``sqrt(si^2 + sj^2) / ((si + sj) |si - sj|)``; inf on ties.

    Works elementwise and is symmetric in its arguments bit for bit.
    """
    si = np.asarray(si, dtype=float)
    sj = np.asarray(sj, dtype=float)
    gap = np.abs(si - sj)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (1.0 / gap) * np.sqrt((si * si + sj * sj) / ((si + sj) * (si + sj)))
    return np.where(gap == 0, INF, val)


def kappa_formula(spec: PaddedSpectrum, sel: Selection, tie_tol: float = DEFAULT_TIE_TOL,
                  fro_norm: Optional[float] = None) -> ConditionReport:
    """Condition number of the left singular subspace selected by ``sel``.

    Maximizes the pair factor over selected i and unselected j in the
    zero-padded spectrum; the first maximizer in lexicographic order is
    the witness. Empty and full selections give 0.
    """
    if sel.ambient != spec.m:
        raise IndexError(f"selection ambient {sel.ambient} does not match spectrum length {spec.m}")
    memb = membership_check(spec.sigma, sel, tie_tol)
    comp = sel.complement()
    if sel.k == 0 or comp.k == 0:
        report = ConditionReport(0.0, 0.0, None, True, sel.side, sel.k)
    else:
        vals = pair_condition(spec.sigma[sel.offsets()][:, None], spec.sigma[comp.offsets()][None, :])
        a, b = np.unravel_index(int(np.argmax(vals)), vals.shape)
        raw = float(vals[a, b])
        if memb.member and np.isfinite(raw):
            report = ConditionReport(raw, raw, (sel.indices[a], comp.indices[b]), True, sel.side, sel.k)
        else:
            report = ConditionReport(INF, raw, None, False, sel.side, sel.k, tie_pair=memb.witness)
    if fro_norm is not None:
        report = _with_mu(report, fro_norm)
    return report


def _with_mu(report: ConditionReport, fro_norm: float) -> ConditionReport:
    return replace(report, mu=relative_condition(report, fro_norm))


def kappa_left(A: MatrixLike, sel: Selection, tie_tol: float = DEFAULT_TIE_TOL,
               rank_rtol: float = DEFAULT_RANK_RTOL) -> ConditionReport:
    A = as_matrix(A)
    if sel.side is not Side.LEFT:
        raise ValueError("kappa_left needs a left selection")
    svd = svd_full(A, rank_rtol)
    return kappa_formula(PaddedSpectrum.from_svd(svd), sel, tie_tol, fro_norm=A.fro_norm())


def kappa_right(A: MatrixLike, sel: Selection, tie_tol: float = DEFAULT_TIE_TOL,
                rank_rtol: float = DEFAULT_RANK_RTOL) -> ConditionReport:
    """Right singular subspaces of A are the left singular subspaces of A^H."""
    A = as_matrix(A)
    if sel.side is not Side.RIGHT:
        raise ValueError("kappa_right needs a right selection")
    if sel.ambient != A.cols:
        raise IndexError(f"right selection ambient {sel.ambient} != n = {A.cols}")
    svd = svd_full(A.H, rank_rtol)
    left = Selection(sel.indices, sel.ambient, Side.LEFT)
    report = kappa_formula(PaddedSpectrum.from_svd(svd), left, tie_tol, fro_norm=A.fro_norm())
    return replace(report, side=Side.RIGHT)


def relative_condition(report: ConditionReport, fro_norm_A: float) -> float:
    """``kappa * ||A||_F``, with 0 for trivial selections and inf for boundary matrices."""
    if fro_norm_A < 0:
        raise ValueError("Frobenius norm must be nonnegative")
    if report.kappa == 0:
        return 0.0
    if not np.isfinite(report.kappa):
        return INF
    return float(report.kappa * fro_norm_A)


def normalized_relative_condition(report: ConditionReport, fro_norm_A: float,
                                  kind: DistanceKind = DistanceKind.CHORDAL) -> float:
    """Relative condition divided by the diameter of Gr(k) in the chosen distance."""
    mu = relative_condition(report, fro_norm_A)
    if report.k == 0 or mu == 0:
        return 0.0
    return mu / max_distance(report.k, kind)


def kappa_diagonal_operator(spec: PaddedSpectrum, sel: Selection) -> float:
    """Condition number as the spectral norm of the block-diagonal operator.

    Reduces to a selection inside the nonzero part of the spectrum (using
    the complement if needed), then builds the diagonals of
    ``I_{m-r} (x) S Sigma^{-1}`` and ``D^{-1}`` with
    ``D^2 = (Sigma_2^2 (x) I - I (x) Sigma_1^2)^2 T^{-1}``,
    ``T = Sigma_2^2 (x) I + I (x) Sigma_1^2``, and returns the larger norm.

    The cokernel block only enters when ``m > r = n``, so this agrees with
    :func:`kappa_formula` for full-rank matrices with distinct singular values.
    """
    if sel.ambient != spec.m:
        raise IndexError("selection does not match spectrum length")
    r, m, n = spec.r, spec.m, spec.n
    inside = set(range(1, r + 1))
    if set(sel.indices) <= inside:
        chosen = sel
    elif set(sel.complement().indices) <= inside:
        chosen = sel.complement()
    else:
        return INF
    if chosen.k == 0 or chosen.k == m:
        return 0.0

    sigma = spec.sigma
    sig1 = sigma[chosen.offsets()]
    others = np.array([j for j in range(1, r + 1) if j not in set(chosen.indices)], dtype=int)
    sig2 = sigma[others - 1]

    if m > r and r == n:
        # diagonal of I_{m-r} (x) S Sigma^{-1}, restricted to the selected coordinates
        block_perp = np.kron(np.ones(m - r), 1.0 / sig1)
        kappa_perp = float(np.max(np.abs(block_perp)))
    else:
        kappa_perp = 0.0

    if len(sig2):
        ones1 = np.ones(len(sig1))
        ones2 = np.ones(len(sig2))
        s2 = np.kron(sig2, ones1)
        s1 = np.kron(ones2, sig1)
        T = s2 * s2 + s1 * s1
        # Sigma_2^2 (x) I - I (x) Sigma_1^2 as a product of diagonals, avoiding cancellation
        sq_diff = (s2 - s1) * (s2 + s1)
        with np.errstate(divide="ignore"):
            D = np.sqrt(sq_diff * sq_diff / T)
            kappa_u = float(np.max(1.0 / D))
    else:
        kappa_u = 0.0
    return max(kappa_perp, kappa_u)
