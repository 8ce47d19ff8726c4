"""Condition numbers of every singleton and pair selection of the 6x5 matrix
[diag(4, 2, 1, 0.99, 0); 0], followed by finite-difference checks along the
closed-form worst directions."""

from itertools import combinations

import numpy as np

from subspace_cond import (
    Matrix,
    ProbeConfig,
    Selection,
    directional_quotient,
    empirical_kappa,
    kappa_left,
    svd_full,
    worst_direction,
)


def main():
    A = np.zeros((6, 5))
    A[:5, :5] = np.diag([4, 2, 1, 0.99, 0])
    A = Matrix(A)
    svd = svd_full(A)
    print("sigma:", svd.sigma, "rank:", svd.rank)

    print("\nselection   kappa                 witness")
    for k in (1, 2):
        for idx in combinations(range(1, 7), k):
            rep = kappa_left(A, Selection.of(idx, 6))
            kappa = "inf" if not rep.finite else f"{rep.kappa:.17g}"
            print(f"{str(set(idx)):<11} {kappa:<21} {rep.witness or '-'}")

    print("\nfinite differences along worst directions")
    for idx in ((3,), (4,), (3, 4), (5, 6), (1,)):
        sel = Selection.of(idx, 6)
        rep = kappa_left(A, sel)
        wd = worst_direction(svd, *rep.witness)
        for t in (1e-3, 1e-5, 1e-7):
            q = directional_quotient(A, sel, wd.normalized(), t * 0.01)
            print(f"  pi={set(idx)} step={t * 0.01:.0e} quotient={q:.15g} kappa={rep.kappa:.15g}")

    res = empirical_kappa(A, Selection.of([3], 6), ProbeConfig(num_random_dirs=64, seed=42))
    print(f"\nprobe pi={{3}}: extrapolated {res.extrapolated:.15g}, best random {res.random_max:.6g}")


if __name__ == "__main__":
    main()
