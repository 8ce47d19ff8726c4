"""Closed form vs. finite-difference probing on a seeded random ensemble.

Usage: python scripts/ensemble_probe.py [count] [dirs] [metric]
"""

import sys
import time

import numpy as np

from subspace_cond import ProbeConfig, empirical_kappa, kappa_left
from subspace_cond.ensemble import seeded_ensemble


def main(count=100, dirs=64, metric="chordal"):
    worst_err, random_ratio = [], []
    start = time.perf_counter()
    for case in seeded_ensemble(count):
        rep = kappa_left(case.A, case.sel)
        res = empirical_kappa(case.A, case.sel, ProbeConfig(num_random_dirs=dirs, seed=case.case_id, kind=metric))
        worst_err.append(abs(res.worst.extrapolated - rep.kappa) / rep.kappa)
        random_ratio.append(res.random_max / rep.kappa)
    worst_err, random_ratio = np.array(worst_err), np.array(random_ratio)
    print(f"{count} matrices, {dirs} random directions, metric {metric}, {time.perf_counter() - start:.1f}s")
    print(f"worst direction relative error: max {worst_err.max():.3e}, median {np.median(worst_err):.3e}")
    print(f"best random / kappa: max {random_ratio.max():.6f}, median {np.median(random_ratio):.4f}, "
          f"min {random_ratio.min():.4f}")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(int(args[0]) if args else 100, int(args[1]) if len(args) > 1 else 64,
         args[2] if len(args) > 2 else "chordal")
