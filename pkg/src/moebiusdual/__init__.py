"""Three-branch piecewise Moebius interval maps: natural duals of the jump
transformation, exact invariant densities, and orbit statistics."""

from .exactnum import (
    Polynomial,
    RationalFunction,
    as_fraction,
    poly_interpolate,
    rf_compose_moebius,
    rf_equal,
    rf_proportional,
)
from .moebius import INFINITY, DegenerateMapError, MoebiusMap, ProjPoint, make_map
from .systems import (
    BranchSet,
    JumpSystem,
    SpecError,
    SystemSpec,
    TypeVector,
    ValidationReport,
    build_branches,
    build_jump,
    forward_map,
    reflect_system,
    validate_system,
)
from .dual import (
    DualCandidate,
    ProjInterval,
    SymmetryRow,
    common_fixed_point,
    conic_point,
    conic_residual,
    density_from_interval,
    det_polynomial,
    det_system,
    dual_interval,
    fixed_point_density,
    solve_dual,
    symmetry_row,
    validate_dual,
)
from .density import (
    PiecewiseDensity,
    RationalDensity,
    cdf_eval,
    closed_form_density,
    invariance_residual,
    lift_density,
    make_cdf,
    normalize,
    transfer_base,
    transfer_jump,
)
from .simulate import (
    HistogramReport,
    OrbitConfig,
    OrbitResult,
    histogram,
    histogram_csv,
    ks_distance,
    run_orbit,
)

__version__ = "0.1.0"
