"""Certified bounds for the radius of robust feasibility of uncertain
linear conic programs under ball uncertainty.

The radius is bracketed by base-dependent multiples of the distance from
the origin to an epigraphical set; that distance is computed by a
Frank-Wolfe loop whose linear gap certifies a two-sided interval.  For
linear programs the bracket collapses to the exact value.  A brute-force
oracle, a robust-SVM separability application, JSON/CSV/SDPA interfaces
and a CLI round out the package.
"""

__version__ = "0.1.0"

from ._backend import backend_name, compiled_available
from .bounds import RrfReport, gap_ratio, rrf_bounds, rrf_exact_lp
from .errors import (
    BadLabels,
    DimensionMismatch,
    DimensionTooLarge,
    DykstraNoConvergence,
    NoConvergence,
    NonFiniteEntry,
    NotSymmetric,
    PsdDimInvalid,
    RaggedRows,
    RrfError,
    SchemaError,
    UnsupportedBase,
    WrongCone,
)
from .geometry import (
    BaseConstants,
    base_constants,
    eigh,
    l1_extremes,
    lmo,
    membership,
    project,
    sample_extreme,
)
from .model import (
    BaseKind,
    CompactBaseSpec,
    ConeKind,
    NominalProblem,
    NonnegOrthant,
    ProductCone,
    PsdCone,
    SecondOrderCone,
    SvecMap,
    UncertaintyRadii,
    natural_base,
    smat,
    svec,
    validate_problem,
)
from .oracle import (
    FeasibilityStatus,
    FeasibilityVerdict,
    OracleConfig,
    RrfEstimate,
    admissibility_probe,
    is_robust_feasible,
    rrf_estimate,
    slater_margin,
    worst_case_margin,
)
from .solver import (
    DistanceResult,
    SolverConfig,
    epigraph_distance,
    exact_line_search,
    reduced_objective,
)
from .svm import (
    SeparabilityResult,
    TrainingSet,
    lift_svm,
    separability_radius,
    verify_separation,
)

__all__ = [
    "__version__",
    "backend_name",
    "compiled_available",
    "RrfReport",
    "gap_ratio",
    "rrf_bounds",
    "rrf_exact_lp",
    "BadLabels",
    "DimensionMismatch",
    "DimensionTooLarge",
    "DykstraNoConvergence",
    "NoConvergence",
    "NonFiniteEntry",
    "NotSymmetric",
    "PsdDimInvalid",
    "RaggedRows",
    "RrfError",
    "SchemaError",
    "UnsupportedBase",
    "WrongCone",
    "BaseConstants",
    "base_constants",
    "eigh",
    "l1_extremes",
    "lmo",
    "membership",
    "project",
    "sample_extreme",
    "BaseKind",
    "CompactBaseSpec",
    "ConeKind",
    "NominalProblem",
    "NonnegOrthant",
    "ProductCone",
    "PsdCone",
    "SecondOrderCone",
    "SvecMap",
    "UncertaintyRadii",
    "natural_base",
    "smat",
    "svec",
    "validate_problem",
    "FeasibilityStatus",
    "FeasibilityVerdict",
    "OracleConfig",
    "RrfEstimate",
    "admissibility_probe",
    "is_robust_feasible",
    "rrf_estimate",
    "slater_margin",
    "worst_case_margin",
    "DistanceResult",
    "SolverConfig",
    "epigraph_distance",
    "exact_line_search",
    "reduced_objective",
    "SeparabilityResult",
    "TrainingSet",
    "lift_svm",
    "separability_radius",
    "verify_separation",
]
