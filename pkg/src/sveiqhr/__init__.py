"""SVEIQHR COVID-19 intervention model.

Library entry points re-exported here; see the CLI (`sveiqhr --help`)
and the HTTP service (`sveiqhr serve`) for the tooling built on top.
"""

from .dynamics import (
    IntegratorConfig,
    PeakSummary,
    Trajectory,
    default_initial,
    peak_and_limit,
    simulate,
)
from .errors import (
    DegenerateQuadratic,
    EmptyTrajectory,
    InvariantViolation,
    ModelError,
    ParseError,
    SingularDenominator,
    SingularL1,
    StepFailure,
    UnknownLevel,
    ValidationError,
    ZeroR0,
)
from .equilibrium import (
    EndemicSolveReport,
    EquilibriumReport,
    NgmPair,
    compute_r0,
    dfe_stability,
    disease_free_equilibrium,
    endemic_consistency_check,
    endemic_equilibrium,
    endemic_stability,
    ngm,
    ngm_spectral_radius,
)
from .model import (
    DerivedConstants,
    ModelParameters,
    State,
    derive_constants,
    jacobian,
    rhs,
)
from .strategy import (
    LEVEL1_PROFILE,
    RegionGeometry,
    RestrictionProfile,
    SensitivityTable,
    intervention_sweep,
    ppkm_level_u2,
    r0_slice,
    region_geometry,
    sensitivity_index,
    significance_ranking,
    u2_from_profile,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParameters", "State", "DerivedConstants", "derive_constants", "rhs", "jacobian",
    "IntegratorConfig", "Trajectory", "PeakSummary", "simulate", "peak_and_limit",
    "default_initial",
    "NgmPair", "EquilibriumReport", "EndemicSolveReport", "disease_free_equilibrium",
    "ngm", "ngm_spectral_radius", "compute_r0", "dfe_stability", "endemic_equilibrium",
    "endemic_consistency_check", "endemic_stability",
    "RestrictionProfile", "RegionGeometry", "SensitivityTable", "LEVEL1_PROFILE",
    "u2_from_profile", "ppkm_level_u2", "region_geometry", "r0_slice",
    "sensitivity_index", "significance_ranking", "intervention_sweep",
    "ModelError", "ValidationError", "ParseError", "StepFailure", "InvariantViolation",
    "EmptyTrajectory", "UnknownLevel", "SingularL1", "ZeroR0", "SingularDenominator",
    "DegenerateQuadratic",
    "__version__",
]
