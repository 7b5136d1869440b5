"""Coordinate charts for R^3 and the embedded quadrics of revolution.

Prolate elliptic coordinates (xi, eta, phi) are tied to two foci on the
z-axis at z = -a and z = +a; parabolic coordinates (xi, eta, phi) to a single
focus at the origin.  All transforms are pure functions on immutable values.
"""

import math
from dataclasses import dataclass

from .constants import TOL
from .errors import DomainError

TWO_PI = 2.0 * math.pi


def normalize_angle(phi):
    """Map an angle into [0, 2*pi)."""
    out = math.fmod(phi, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    return out if out < TWO_PI else 0.0


@dataclass(frozen=True)
class CylPoint:
    """Cylindrical coordinates (rho >= 0, z, phi in [0, 2*pi))."""

    rho: float
    z: float
    phi: float = 0.0

    def __post_init__(self):
        if self.rho < 0.0:
            raise DomainError("rho must be nonnegative, got %r" % (self.rho,))
        object.__setattr__(self, "phi", normalize_angle(self.phi))


@dataclass(frozen=True)
class EllipticPoint:
    """Prolate elliptic coordinates with focal half-separation a > 0.

    xi >= 1 labels confocal ellipsoids, eta in [-1, 1] confocal hyperboloids.
    """

    xi: float
    eta: float
    phi: float = 0.0
    a: float = 1.0

    def __post_init__(self):
        if self.a <= 0.0:
            raise DomainError("focal half-separation a must be positive")
        if self.xi < 1.0:
            raise DomainError("xi must be >= 1, got %r" % (self.xi,))
        if abs(self.eta) > 1.0:
            raise DomainError("eta must lie in [-1, 1], got %r" % (self.eta,))
        object.__setattr__(self, "phi", normalize_angle(self.phi))


@dataclass(frozen=True)
class ParabolicPoint:
    """Parabolic coordinates; xi and eta are both nonnegative."""

    xi: float
    eta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.xi < 0.0 or self.eta < 0.0:
            raise DomainError("parabolic coordinates must be nonnegative")
        object.__setattr__(self, "phi", normalize_angle(self.phi))


def elliptic_to_cylindrical(p: EllipticPoint) -> CylPoint:
    """rho = a*sqrt((xi^2-1)(1-eta^2)), z = a*xi*eta; phi is untouched."""
    rho = p.a * math.sqrt(max(0.0, (p.xi * p.xi - 1.0) * (1.0 - p.eta * p.eta)))
    return CylPoint(rho=rho, z=p.a * p.xi * p.eta, phi=p.phi)


def focal_distances(p: CylPoint, a: float):
    """Distances from the point to the two foci (0,0,-a) and (0,0,+a)."""
    if a <= 0.0:
        raise DomainError("focal half-separation a must be positive")
    r1 = math.hypot(p.rho, p.z + a)
    r2 = math.hypot(p.rho, p.z - a)
    return r1, r2


def cylindrical_to_elliptic(p: CylPoint, a: float) -> EllipticPoint:
    """Inverse chart via the focal distances (well conditioned near xi=1, |eta|=1)."""
    r1, r2 = focal_distances(p, a)
    xi = (r1 + r2) / (2.0 * a)
    eta = (r1 - r2) / (2.0 * a)
    # clamp roundoff just outside the closed ranges
    if xi < 1.0:
        xi = 1.0
    if eta > 1.0:
        eta = 1.0
    elif eta < -1.0:
        eta = -1.0
    return EllipticPoint(xi=xi, eta=eta, phi=p.phi, a=a)


def parabolic_to_cylindrical(p: ParabolicPoint) -> CylPoint:
    """rho = sqrt(xi*eta), z = (xi-eta)/2; phi is untouched."""
    return CylPoint(rho=math.sqrt(p.xi * p.eta), z=0.5 * (p.xi - p.eta), phi=p.phi)


def cylindrical_to_parabolic(p: CylPoint) -> ParabolicPoint:
    """Solve xi*eta = rho^2, xi - eta = 2z with xi, eta >= 0."""
    r = math.hypot(p.rho, p.z)
    xi = r + p.z
    eta = r - p.z
    if xi < 0.0:
        xi = 0.0
    if eta < 0.0:
        eta = 0.0
    return ParabolicPoint(xi=xi, eta=eta, phi=p.phi)


def ellipsoid_residual(c: CylPoint, a: float, xi0: float) -> float:
    """Defect of the coordinate-surface equation for the ellipsoid xi = xi0."""
    return (c.z * c.z / (a * a * xi0 * xi0)
            + c.rho * c.rho / (a * a * (xi0 * xi0 - 1.0)) - 1.0)


def hyperboloid_residual(c: CylPoint, a: float, eta0: float) -> float:
    """Defect of the coordinate-surface equation for the hyperboloid eta = eta0."""
    return (c.z * c.z / (a * a * eta0 * eta0)
            - c.rho * c.rho / (a * a * (1.0 - eta0 * eta0)) - 1.0)


def paraboloid_residual(c: CylPoint, eta0: float) -> float:
    """Defect of rho^2/eta0 + eta0 - 2z = 0 for the paraboloid eta = eta0."""
    return c.rho * c.rho / eta0 + eta0 - 2.0 * c.z


ROUNDTRIP_TOL = TOL.chart_roundtrip
