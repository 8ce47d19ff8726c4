"""Condition numbers of left and right singular subspaces, with numerical oracles."""

from subspace_cond.linalg_core import (
    Field,
    Matrix,
    Membership,
    Selection,
    Side,
    SubspaceProjector,
    SvdError,
    SvdFactors,
    as_matrix,
    membership_check,
    selection_projector,
    subspace_of,
    svd_full,
)
from subspace_cond.grassmann import DistanceKind, PrincipalAngles, distance, principal_angles
from subspace_cond.condition import (
    ConditionReport,
    PaddedSpectrum,
    kappa_diagonal_operator,
    kappa_formula,
    kappa_left,
    kappa_right,
    normalized_relative_condition,
    relative_condition,
)
from subspace_cond.perturbation_lab import (
    PerturbationDirection,
    PerturbationError,
    ProbeConfig,
    ProbeResult,
    directional_quotient,
    empirical_kappa,
    restrict_scalars,
    worst_direction,
)

__version__ = "0.1.0"

__all__ = [
    "ConditionReport",
    "DistanceKind",
    "Field",
    "Matrix",
    "Membership",
    "PaddedSpectrum",
    "PerturbationDirection",
    "PerturbationError",
    "PrincipalAngles",
    "ProbeConfig",
    "ProbeResult",
    "Selection",
    "Side",
    "SubspaceProjector",
    "SvdError",
    "SvdFactors",
    "as_matrix",
    "directional_quotient",
    "distance",
    "empirical_kappa",
    "kappa_diagonal_operator",
    "kappa_formula",
    "kappa_left",
    "kappa_right",
    "membership_check",
    "normalized_relative_condition",
    "principal_angles",
    "relative_condition",
    "restrict_scalars",
    "selection_projector",
    "subspace_of",
    "svd_full",
    "worst_direction",
]
