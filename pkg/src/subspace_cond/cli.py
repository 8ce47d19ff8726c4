"""Command-line interface: ``subspace-cond {cond,verify,worst,distance}``.

Exit codes: 0 success with finite condition number, 1 usage or input error,
2 condition number infinite or zero where a direction is needed (boundary
case), 3 verification verdict failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from subspace_cond import __version__
from subspace_cond.condition import ConditionReport, PaddedSpectrum, kappa_formula
from subspace_cond.grassmann import DistanceKind, distance, principal_angles
from subspace_cond.linalg_core import (
    DEFAULT_RANK_RTOL,
    DEFAULT_TIE_TOL,
    Matrix,
    Selection,
    Side,
    SubspaceProjector,
    svd_full,
)
from subspace_cond.matrix_io import MatrixFormatError, dumps_report, fmt, read_matrix, write_matrix
from subspace_cond.perturbation_lab import (
    DEFAULT_T_SCHEDULE,
    PerturbationDirection,
    PerturbationError,
    ProbeConfig,
    empirical_kappa,
    worst_direction,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUNDARY = 2
EXIT_VERDICT = 3

VERIFY_RTOL = 1e-3
SEED_ENV = "SUBSPACE_COND_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_indices(text: str) -> List[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise UsageError(f"malformed selection {text!r}; expected e.g. 3,4") from None


def parse_floats(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"malformed number list {text!r}") from None


def _selection(A: Matrix, pi: str, side: str) -> Selection:
    side = Side(side)
    ambient = A.rows if side is Side.LEFT else A.cols
    try:
        return Selection(tuple(parse_indices(pi)), ambient, side)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _left_problem(A: Matrix, sel: Selection, rank_rtol: float):
    """SVD and left selection of the equivalent left-subspace problem."""
    if sel.side is Side.RIGHT:
        return svd_full(A.H, rank_rtol), Selection(sel.indices, sel.ambient, Side.LEFT)
    return svd_full(A, rank_rtol), sel


def condition_report(A: Matrix, sel: Selection, tie_tol: float = DEFAULT_TIE_TOL,
                     rank_rtol: float = DEFAULT_RANK_RTOL) -> Dict[str, Any]:
    svd, left = _left_problem(A, sel, rank_rtol)
    rep: ConditionReport = kappa_formula(PaddedSpectrum.from_svd(svd), left, tie_tol, fro_norm=A.fro_norm())
    return {
        "tool": "subspace-cond",
        "version": __version__,
        "input": {"m": A.rows, "n": A.cols, "field": A.field.value, "fro_norm": A.fro_norm()},
        "spectrum": svd.sigma,
        "rank": svd.rank,
        "selection": {"indices": list(sel.indices), "side": sel.side.value},
        "kappa": rep.kappa,
        "raw_kappa": rep.raw_kappa,
        "mu": rep.mu,
        "witness": list(rep.witness) if rep.witness else None,
        "member": rep.member,
        "near_tie": rep.near_tie,
        "tie_pair": list(rep.tie_pair) if rep.tie_pair else None,
        "tie_tol": tie_tol,
        "rank_rtol": rank_rtol,
    }


def _print_text(lines: Sequence[str]) -> None:
    print("\n".join(lines))


def _num(x) -> str:
    if x is None:
        return "-"
    return "inf" if np.isinf(x) else fmt(x)


def _emit(report: Dict[str, Any], as_json: bool, text_lines: Sequence[str]) -> None:
    if as_json:
        print(dumps_report(report))
    else:
        _print_text(text_lines)


def _seed(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def cmd_cond(args) -> int:
    A = read_matrix(args.matrix)
    sel = _selection(A, args.pi, args.side)
    rep = condition_report(A, sel, args.tie_tol, args.rank_rtol)
    lines = [
        f"kappa   {_num(rep['kappa'])}",
        f"mu      {_num(rep['mu'])}",
        f"witness {tuple(rep['witness']) if rep['witness'] else '-'}",
        f"member  {rep['member']}",
    ]
    if rep["near_tie"]:
        lines.append(f"near tie at {tuple(rep['tie_pair'])}: raw formula value {_num(rep['raw_kappa'])}")
    _emit(rep, args.json, lines)
    return EXIT_OK if np.isfinite(rep["kappa"]) else EXIT_BOUNDARY


def cmd_verify(args) -> int:
    A = read_matrix(args.matrix)
    sel = _selection(A, args.pi, args.side)
    rep = condition_report(A, sel, args.tie_tol, args.rank_rtol)
    if not np.isfinite(rep["kappa"]):
        print(f"boundary matrix: selection splits a repeated singular value at "
              f"{tuple(rep['tie_pair'])}; kappa = inf", file=sys.stderr)
        _emit(rep, args.json, [f"kappa   inf"])
        return EXIT_BOUNDARY
    cfg = ProbeConfig(num_random_dirs=args.dirs, t_schedule=tuple(parse_floats(args.t_schedule)),
                      seed=_seed(args.seed), kind=DistanceKind(args.metric), include_worst=True)
    probe = empirical_kappa(A, sel, cfg, args.tie_tol, args.rank_rtol)
    kappa = rep["kappa"]
    if kappa == 0:
        err = probe.extrapolated
    else:
        err = abs(probe.extrapolated - kappa) / kappa
    passed = err <= VERIFY_RTOL
    rep.update({
        "seed": cfg.seed,
        "probe": {
            "metric": cfg.kind.value,
            "num_random_dirs": cfg.num_random_dirs,
            "t_schedule": list(cfg.t_schedule),
            "t_values": probe.t_values,
            "quotients": probe.quotients,
            "empirical": probe.extrapolated,
            "random_max": probe.random_max,
            "worst_quotients": probe.worst.quotients if probe.worst else None,
            "relative_error": err,
            "tolerance": VERIFY_RTOL,
            "verdict": "pass" if passed else "fail",
        },
    })
    lines = [
        f"kappa      {_num(kappa)}",
        f"empirical  {_num(probe.extrapolated)}",
        f"random max {_num(probe.random_max)}",
        f"metric     {cfg.kind.value}",
    ]
    lines += [f"  t={_num(t)}  quotient={_num(q)}" for t, q in zip(probe.t_values, probe.quotients)]
    lines.append(f"verdict    {'pass' if passed else 'fail'} (relative error {err:.3g})")
    _emit(rep, args.json, lines)
    return EXIT_OK if passed else EXIT_VERDICT


def cmd_worst(args) -> int:
    A = read_matrix(args.matrix)
    sel = _selection(A, args.pi, args.side)
    rep = condition_report(A, sel, args.tie_tol, args.rank_rtol)
    if not np.isfinite(rep["kappa"]) or rep["kappa"] == 0:
        print(f"no worst direction: kappa = {_num(rep['kappa'])}", file=sys.stderr)
        return EXIT_BOUNDARY
    svd, _ = _left_problem(A, sel, args.rank_rtol)
    i, j = rep["witness"]
    wd = worst_direction(svd, i, j)
    if sel.side is Side.RIGHT:
        wd = PerturbationDirection(wd.Adot.H, wd.label)
    norm = wd.norm()
    out = wd.normalized() if args.normalize else wd
    write_matrix(args.out, out.Adot)
    print(f"witness {(i, j)}")
    print(f"norm    {fmt(norm)}")
    return EXIT_OK


def _as_projector(M: Matrix, tol: float = 1e-10) -> SubspaceProjector:
    """Square Hermitian idempotent input is a projector; anything else is a basis."""
    X = M.data
    if M.rows == M.cols:
        scale = max(1.0, np.linalg.norm(X))
        if np.linalg.norm(X - X.conj().T) <= tol * scale and np.linalg.norm(X @ X - X) <= tol * scale:
            return SubspaceProjector(X, int(round(np.trace(X).real)))
    U, s, _ = np.linalg.svd(X, full_matrices=False)
    rank = int(np.count_nonzero(s > tol * s[0])) if s[0] > 0 else 0
    return SubspaceProjector.from_basis(U[:, :rank])


def cmd_distance(args) -> int:
    P = _as_projector(read_matrix(args.first))
    Q = _as_projector(read_matrix(args.second))
    if P.dim_ambient != Q.dim_ambient or P.rank != Q.rank:
        raise UsageError(f"subspaces not comparable: dim {P.rank} in K^{P.dim_ambient} "
                         f"vs dim {Q.rank} in K^{Q.dim_ambient}")
    kinds = list(DistanceKind) if args.metric == "all" else [DistanceKind(args.metric)]
    theta = principal_angles(P, Q).theta
    dists = {k.value: distance(P, Q, k) for k in kinds}
    rep = {"tool": "subspace-cond", "version": __version__, "ambient": P.dim_ambient,
           "rank": P.rank, "theta": theta, "distances": dists}
    lines = ["theta   " + " ".join(_num(t) for t in theta)]
    lines += [f"{k:<10}{_num(v)}" for k, v in dists.items()]
    _emit(rep, args.json, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="subspace-cond", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("matrix", help="matrix file")
        sp.add_argument("--pi", default="", help="comma-separated 1-based indices (empty for none)")
        sp.add_argument("--side", choices=["left", "right"], default="left")
        sp.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
        sp.add_argument("--rank-rtol", type=float, default=DEFAULT_RANK_RTOL)

    sp = sub.add_parser("cond", help="closed-form condition number")
    common(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_cond)

    sp = sub.add_parser("verify", help="check the closed form by finite differences")
    common(sp)
    sp.add_argument("--dirs", type=int, default=64, help="number of random directions")
    sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (fallback: ${SEED_ENV}, then 0)")
    sp.add_argument("--metric", choices=[k.value for k in DistanceKind], default="chordal")
    sp.add_argument("--t-schedule", default=",".join(str(t) for t in DEFAULT_T_SCHEDULE))
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("worst", help="write the worst perturbation direction")
    common(sp)
    sp.add_argument("--out", required=True, help="output matrix file")
    sp.add_argument("--normalize", action="store_true", help="scale to unit Frobenius norm")
    sp.set_defaults(func=cmd_worst)

    sp = sub.add_parser("distance", help="principal angles and distances between two subspaces")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--metric", choices=["all"] + [k.value for k in DistanceKind], default="all")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_distance)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MatrixFormatError, OSError, IndexError) as exc:
        print(f"subspace-cond: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PerturbationError as exc:
        print(f"subspace-cond: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY


if __name__ == "__main__":
    sys.exit(main())
