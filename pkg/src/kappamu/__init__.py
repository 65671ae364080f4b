"""Homogeneous contact metric (kappa, mu)-spaces: models, invariants and their symmetric bases."""

from kappamu.contact import (
    ContactStructureAtO,
    KappaMu,
    boeckx_invariant,
    boeckx_t1m,
    compute_h,
    d_homothetic,
    fit_kappa_mu,
    kmu_curvature_eval,
)
from kappamu.estimator import KappaMuSpace
from kappamu.exceptions import (
    BoundaryInvariantError,
    KappaMuError,
    NotASubalgebraError,
    NotInSpanError,
    NotKappaMuCandidateError,
    SasakianError,
)
from kappamu.homspace import ReductiveDecomposition, levi_civita_connection, levi_civita_curvature
from kappamu.liecore import OrderedBasis, bracket, so_basis, structure_constants
from kappamu.models import (
    Family,
    ModelSpec,
    Report,
    Tolerances,
    alpha_for_invariant,
    build_model,
    closed_form_invariant,
    verify_model,
)
from kappamu.triple import (
    StructureOperator,
    TripleSystem,
    classify_base,
    jordan_curvature,
    sphere_jts,
    sphere_lts,
    standard_constant,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryInvariantError",
    "ContactStructureAtO",
    "Family",
    "KappaMu",
    "KappaMuError",
    "KappaMuSpace",
    "ModelSpec",
    "NotASubalgebraError",
    "NotInSpanError",
    "NotKappaMuCandidateError",
    "OrderedBasis",
    "ReductiveDecomposition",
    "Report",
    "SasakianError",
    "StructureOperator",
    "Tolerances",
    "TripleSystem",
    "alpha_for_invariant",
    "boeckx_invariant",
    "boeckx_t1m",
    "bracket",
    "build_model",
    "classify_base",
    "closed_form_invariant",
    "compute_h",
    "d_homothetic",
    "fit_kappa_mu",
    "jordan_curvature",
    "kmu_curvature_eval",
    "levi_civita_connection",
    "levi_civita_curvature",
    "so_basis",
    "sphere_jts",
    "sphere_lts",
    "standard_constant",
    "structure_constants",
    "verify_model",
]
