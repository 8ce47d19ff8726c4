"""Seeded random test matrices with admissible selections."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from subspace_cond.linalg_core import Field, Matrix, Selection, Side


@dataclass(frozen=True)
class EnsembleCase:
    case_id: int
    A: Matrix
    sel: Selection


def random_selection(rng: np.random.Generator, m: int, n: int) -> Selection:
    """Nontrivial left selection that never splits the cokernel of a generic m x n matrix."""
    r = min(m, n)
    cokernel = list(range(r + 1, m + 1))
    while True:
        chosen = [i for i in range(1, r + 1) if rng.random() < 0.5]
        if cokernel and rng.random() < 0.5:
            chosen += cokernel
        if 0 < len(chosen) < m:
            return Selection(tuple(chosen), m, Side.LEFT)


def random_matrix(rng: np.random.Generator, m: int, n: int, fld: Field) -> Matrix:
    X = rng.standard_normal((m, n))
    if fld is Field.COMPLEX:
        X = X + 1j * rng.standard_normal((m, n))
    return Matrix(X, fld)


def seeded_ensemble(count: int = 100, seed: int = 20240, max_rows: int = 8,
                    max_cols: int = 6) -> Iterator[EnsembleCase]:
    """Gaussian matrices of random shape up to ``max_rows x max_cols``, alternating real and complex.

    Each case draws from its own stream keyed by ``(seed, case_id)``.
    """
    for cid in range(count):
        rng = np.random.default_rng([seed, cid])
        m = int(rng.integers(2, max_rows + 1))
        n = int(rng.integers(1, max_cols + 1))
        fld = Field.COMPLEX if cid % 2 else Field.REAL
        yield EnsembleCase(cid, random_matrix(rng, m, n, fld), random_selection(rng, m, n))
