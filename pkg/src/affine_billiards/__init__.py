"""Best approximating polygons and beta-function asymptotics for convex tables."""

from .affine_geometry import AffineCurve, OmegaReport, build_affine, check_omega_relations
from .billiard_maps import (
    outer_orbit,
    outer_point_step,
    outer_step,
    rotation_number,
    symplectic_orbit,
    symplectic_step,
)
from .coeff_extraction import (
    DEFAULT_LADDER,
    DeficitSeries,
    ExtractionResult,
    OddPowerCheck,
    collect_deficits,
    extract,
    extract_coeffs,
    odd_power_check,
)
from .curve_model import CurveSpec, Jet, enclosed_area, evaluate_jet, omega, ordinary_curvature
from .errors import (
    ConvexityError,
    CurveSpecError,
    ExtractionError,
    PhaseSpaceError,
    SolverError,
    UnsupportedOrderError,
)
from .expansions import (
    ExpansionCoefficients,
    TabReport,
    beta_from_area,
    beta_from_deficit,
    ellipse_beta_coeffs,
    predict_beta_coeffs,
    predict_deficit_coeffs,
    predict_spacing,
    series_remainder_table,
    tab_inequality,
)
from .polygon_solvers import (
    PolygonSolution,
    SolverConfig,
    best_polygon,
    deficit_sweep,
    solve_circumscribed,
    solve_inscribed,
    spacing_gaps,
)

__all__ = [
    "AffineCurve",
    "CurveSpec",
    "DEFAULT_LADDER",
    "DeficitSeries",
    "ExpansionCoefficients",
    "ExtractionResult",
    "Jet",
    "OddPowerCheck",
    "OmegaReport",
    "PolygonSolution",
    "SolverConfig",
    "TabReport",
    "best_polygon",
    "beta_from_area",
    "beta_from_deficit",
    "build_affine",
    "check_omega_relations",
    "collect_deficits",
    "deficit_sweep",
    "ellipse_beta_coeffs",
    "enclosed_area",
    "evaluate_jet",
    "extract",
    "extract_coeffs",
    "odd_power_check",
    "omega",
    "ordinary_curvature",
    "outer_orbit",
    "outer_point_step",
    "outer_step",
    "predict_beta_coeffs",
    "predict_deficit_coeffs",
    "predict_spacing",
    "rotation_number",
    "series_remainder_table",
    "solve_circumscribed",
    "solve_inscribed",
    "spacing_gaps",
    "symplectic_orbit",
    "symplectic_step",
    "tab_inequality",
    "ConvexityError",
    "CurveSpecError",
    "ExtractionError",
    "PhaseSpaceError",
    "SolverError",
    "UnsupportedOrderError",
]

__version__ = "0.1.0"
