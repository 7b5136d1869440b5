"""Centralized numerical tolerances and chart guard bands."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Single configuration record for all internal tolerance constants."""

    # chart transforms must round-trip to this accuracy (double precision)
    chart_roundtrip: float = 1e-12
    # open-domain guard band around chart singularities (|eta|=1, xi=1, xi=0)
    singularity_guard: float = 1e-10
    # expanded vs canonical (gauge-split) Hamiltonian agreement
    gauge_identity_rtol: float = 1e-12
    # target relative accuracy of singular band quadratures
    quadrature_target: float = 1e-10
    # bisection width for oracle turning points
    turning_point: float = 1e-12
    # verdict threshold for closed-form vs oracle audits
    audit_consistent: float = 1e-10


TOL = Tolerances()

# dense-output sampling density used for trajectory reporting (configurable
# per call; this is the default used by the CLI and period measurement)
SAMPLES_PER_OSCILLATION = 512
