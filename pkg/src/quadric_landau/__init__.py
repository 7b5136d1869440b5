"""Classical dynamics on quadrics of revolution in dyonic background fields.

Free-particle and Landau-type Hamiltonians on the ellipsoid, two-sheet
hyperboloid and paraboloid of revolution, with direct integration of
Hamilton's equations, Hamilton-Jacobi quadrature, action variables, and a
numerical audit of every published closed form against the energy-equation
oracle.
"""

from .backend import BACKEND
from .models import (
    Dimension,
    DyonPair,
    Ellipsoid,
    GaugeSplit,
    Hyperboloid,
    Paraboloid,
    ParabolicBackground,
    PhasePoint,
    ReducibilityReport,
    SurfaceModel,
    canonical_energy,
    classify_reducible,
    energy,
    gauge_split,
    gradients,
    make_model,
    radial_momentum_squared,
    restrict_3d,
)
from .dynamics import (
    ConservationReport,
    PeriodMeasurement,
    Trajectory,
    conservation_report,
    integrate,
    measure_radial_period,
)
from .quadrature import (
    AllowedBand,
    AuditReport,
    RadicalQuadratic,
    TurningPoints,
    audit_formula,
    b_constants,
    build_radicand,
    find_band,
    free_form_reduction,
    orbit_quadrature,
    radial_cycle,
    turning_points_closed,
    turning_points_oracle,
)
from .special import AppellParams, appell_f1, appell_f1_series
from .actions import (
    ActionResult,
    action_I1_appell,
    action_I1_quadrature,
    action_I2,
    appell_readings,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
