"""Pointwise verification of curvature inequalities for submanifolds of
(kappa, mu)-contact space forms."""

from .algebra import Frame, PlaneSection, complete_basis, orthonormalize, restrict_to_plane
from .contact import (
    KMuStructure,
    ValidationReport,
    canonical_structure,
    random_structure,
    validate_structure,
)
from .curvature import (
    ambient_curvature,
    ambient_curvature_direct,
    ambient_sectional,
    curvature_tensor,
    nullity_residual,
    tensor_symmetry_residuals,
)
from .invariants import (
    DeltaResult,
    SectionalMinimum,
    brute_force_min_sectional,
    delta,
    min_sectional,
    scalar_curvature,
    sectional_curvature,
)
from .modelfile import ModelFile
from .submanifold import (
    SubmanifoldPoint,
    induced_curvature,
    mean_curvature,
    plane_invariants,
    tangential_operators,
    validate_submanifold,
)
from .theorems import (
    InequalityReport,
    ShapeFormDiagnosis,
    check_basic_equality,
    check_corollary1,
    check_invariant_delta_bound,
    check_invariant_properties,
    check_invariant_tau_bound,
    check_theorem1,
    check_theorem2,
    check_umbilical,
    chen_lemma,
    classify_shape_operators,
    fundamental_identity,
)

__version__ = "0.1.0"
