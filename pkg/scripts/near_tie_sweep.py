"""Growth of the condition number as two selected/unselected singular values merge.

Sweeps sigma_4 -> sigma_3 = 1 in diag(4, 2, 1, sigma_4) and reports kappa for
pi = {3}, the finite-difference estimate, and kappa * gap, which stays in
[1/sqrt(2), 1].
"""

import numpy as np

from subspace_cond import Matrix, ProbeConfig, Selection, empirical_kappa, kappa_left


def main():
    sel = Selection.of([3], 4)
    print("gap        kappa              probe              kappa*gap")
    for gap in np.logspace(-1, -8, 8):
        A = Matrix(np.diag([4.0, 2.0, 1.0, 1.0 - gap]))
        rep = kappa_left(A, sel)
        res = empirical_kappa(A, sel, ProbeConfig(num_random_dirs=0))
        print(f"{gap:.1e}   {rep.kappa:<18.12g} {res.extrapolated:<18.12g} {rep.kappa * gap:.6f}")
    A = Matrix(np.diag([4.0, 2.0, 1.0, 1.0 - 1e-13]))
    rep = kappa_left(A, sel)
    print(f"inside tie band: kappa={rep.kappa}, raw formula value {rep.raw_kappa:.6g}, near_tie={rep.near_tie}")


if __name__ == "__main__":
    main()
