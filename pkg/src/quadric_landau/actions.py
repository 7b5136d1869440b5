"""Action variables for bound motion on the ellipsoid.

I1 is the radial cycle action (1/2pi) closed-integral of p_eta d eta; it is
computed authoritatively by singular quadrature over the oracle band, and
independently by the published hypergeometric closed form, which is audited
against the quadrature.  I2 is the cyclic momentum itself.  The radial
frequency follows from the action-frequency relation via a Richardson
extrapolated derivative of I1 with respect to E.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .backend import EL2D
from .errors import NoBoundMotion, NotReducible
from .models import SurfaceModel, radial_momentum_squared
from .quadrature import band_integral, find_band, oracle_quadratic
from .special import AppellParams, appell_f1, appell_f1_series

__all__ = [
    "ActionResult",
    "action_I1_quadrature",
    "action_I1_appell",
    "action_I2",
    "appell_turning_values",
    "appell_readings",
    "radial_frequency",
]


@dataclass(frozen=True)
class ActionResult:
    I1: float
    I2: float
    method: str
    radial_frequency: Optional[float]


def _bounded_band(m, E, p_phi):
    band = find_band(m, E, p_phi)
    if not band.bounded:
        raise NoBoundMotion(
            "motion is unbounded in the shape coordinate; no action variables")
    return band


def _I1_quadrature_value(m, E, p_phi, target):
    band = _bounded_band(m, E, p_phi)

    def f(u):
        v = radial_momentum_squared(m, u, E, p_phi)
        return math.sqrt(v) if v > 0.0 else 0.0

    return band_integral(f, band.u_lower, band.u_upper, True, True, target) / math.pi


def radial_frequency(I1_of_E, E: float, h: Optional[float] = None) -> float:
    """1 / (2 pi dI1/dE) with a Richardson-extrapolated central difference."""
    if h is None:
        h = 1e-5 * abs(E)
    d1 = (I1_of_E(E + h) - I1_of_E(E - h)) / (2.0 * h)
    d2 = (I1_of_E(E + 0.5 * h) - I1_of_E(E - 0.5 * h)) / h
    dIdE = (4.0 * d2 - d1) / 3.0
    return 1.0 / (2.0 * math.pi * dIdE)


def action_I1_quadrature(m: SurfaceModel, E: float, p_phi: float,
                         target: float = 1e-10,
                         with_frequency: bool = True) -> ActionResult:
    """Cycle action from the oracle band: (1/pi) integral of |p_u| du."""
    I1 = _I1_quadrature_value(m, E, p_phi, target)
    freq = None
    if with_frequency:
        freq = radial_frequency(
            lambda EE: _I1_quadrature_value(m, EE, p_phi, target), E)
    return ActionResult(I1=I1, I2=p_phi, method="quadrature",
                        radial_frequency=freq)


def appell_turning_values(m: SurfaceModel, E: float, p_phi: float):
    """Turning constants (a_minus, a_plus) in the squared-coordinate variable.

    Obtained from the oracle: the radicand is an exact quadratic in
    x = 1 - u^2 for free and reducible ellipsoid configurations, and its
    roots r -+ map to a_-+ = 1 - r_+- in the variable u^2.  a_minus lies in
    (0, 1) (the physical turning value of u^2) and a_plus above 1.
    """
    if m.kind != EL2D:
        raise NoBoundMotion("the closed-form action applies to the ellipsoid")
    A, b1, b2, resid = oracle_quadratic(m, E, p_phi)
    if resid > 1e-9:
        raise NotReducible(
            "radicand is not free-form (fit residual %.2e); the closed form "
            "does not apply" % resid)
    disc = b1 * b1 - 4.0 * b2
    if disc < 0.0:
        raise NoBoundMotion("no real turning pair")
    s = math.sqrt(disc)
    r_lo = 0.5 * (-b1 - s)
    r_hi = 0.5 * (-b1 + s)
    a_minus = 1.0 - r_hi
    a_plus = 1.0 - r_lo
    if not 0.0 < a_minus < 1.0 or a_plus <= 1.0:
        raise NoBoundMotion(
            "turning structure (%r, %r) is not that of bound motion"
            % (a_minus, a_plus))
    return a_minus, a_plus


def _appell_closed_value(m, E, p_phi, reading="integral"):
    a_minus, a_plus = appell_turning_values(m, E, p_phi)
    a = m.surface.a
    pref = a * a_minus * math.sqrt(0.5 * a_plus * E)
    if reading == "integral":
        f1 = appell_f1(AppellParams(alpha=0.5, rho=1.0, lam=-0.5, gamma_sum=2.0,
                                    u=1.0, v=1.0 / a_plus, a_limit=a_minus))
    elif reading == "series":
        f1 = appell_f1_series(0.5, 1.0, -0.5, 2.0, a_minus, a_minus / a_plus)
    else:
        raise ValueError("unknown reading %r" % (reading,))
    return pref * f1


def action_I1_appell(m: SurfaceModel, E: float, p_phi: float,
                     with_frequency: bool = True) -> ActionResult:
    """Published closed form a a_- sqrt(a_+ E / 2) F1(1/2, 1, -1/2, 2, ...).

    Turning constants come from the oracle.  The Euler-integral reading is
    used for the value; ``appell_readings`` reports both candidate readings
    against the quadrature action.
    """
    I1 = _appell_closed_value(m, E, p_phi, "integral")
    freq = None
    if with_frequency:
        freq = radial_frequency(
            lambda EE: _appell_closed_value(m, EE, p_phi, "integral"), E)
    return ActionResult(I1=I1, I2=p_phi, method="appell", radial_frequency=freq)


def appell_readings(m: SurfaceModel, E: float, p_phi: float,
                    target: float = 1e-10) -> dict:
    """Compare both argument readings of the closed form with the quadrature.

    The Euler definition is scale invariant in its integration limit, so the
    "limit equals a_minus" reading and the standard-series reading coincide;
    the report records both values and their match against the quadrature
    action (flagging the closed form if neither agrees).
    """
    quad = _I1_quadrature_value(m, E, p_phi, target)
    euler = _appell_closed_value(m, E, p_phi, "integral")
    series = _appell_closed_value(m, E, p_phi, "series")
    a_minus, a_plus = appell_turning_values(m, E, p_phi)

    def ratio(v):
        return v / quad if quad != 0.0 else math.inf

    out = {
        "I1_quadrature": quad,
        "euler_integral_reading": euler,
        "series_reading": series,
        "ratio_euler_over_quadrature": ratio(euler),
        "ratio_series_over_quadrature": ratio(series),
        "a_minus": a_minus,
        "a_plus": a_plus,
    }
    out["euler_matches"] = bool(abs(out["ratio_euler_over_quadrature"] - 1.0) < 1e-6)
    out["series_matches"] = bool(abs(out["ratio_series_over_quadrature"] - 1.0) < 1e-6)
    out["flagged"] = not (out["euler_matches"] or out["series_matches"])
    return out


def action_I2(p_phi: float) -> float:
    """The azimuthal action is the cyclic momentum itself."""
    return p_phi
