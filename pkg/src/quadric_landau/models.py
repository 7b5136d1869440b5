"""The Hamiltonian family on quadrics of revolution in dyonic backgrounds.

Covers free motion and Landau-type problems on the ellipsoid, two-sheet
hyperboloid and paraboloid of revolution (unit particle mass, unit probe
electric charge), the ambient two-center system in elliptic coordinates, and
its one-center limit with uniform parallel fields in parabolic coordinates.

Every energy-related operation dispatches to the kernel backend; models are
immutable and all evaluations are pure, so instances are safe to share
between threads.
"""

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

from .backend import EL2D, EL3D, HYP2D, PAR2D, PAR3D, core
from .constants import TOL
from .errors import (
    DomainError,
    GaugeUndefined,
    InvalidCombination,
    InvalidRestriction,
)

__all__ = [
    "Ellipsoid",
    "Hyperboloid",
    "Paraboloid",
    "DyonPair",
    "ParabolicBackground",
    "Dimension",
    "SurfaceModel",
    "PhasePoint",
    "GaugeSplit",
    "ReducibilityReport",
    "make_model",
    "energy",
    "canonical_energy",
    "gradients",
    "radial_momentum_squared",
    "gauge_split",
    "classify_reducible",
    "restrict_3d",
    "chart_interval",
]


# ---------------------------------------------------------------------------
# Surface and background specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ellipsoid:
    """Ellipsoid of revolution: focal half-separation a, eccentricity e in (0,1)."""

    a: float
    e: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise InvalidCombination("ellipsoid requires a > 0")
        if not 0.0 < self.e < 1.0:
            raise InvalidCombination(
                "ellipsoid requires eccentricity in (0, 1), got %r" % (self.e,))


@dataclass(frozen=True)
class Hyperboloid:
    """Two-sheet hyperboloid of revolution: a > 0, eccentricity e > 1."""

    a: float
    e: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise InvalidCombination("hyperboloid requires a > 0")
        if self.e <= 1.0:
            raise InvalidCombination(
                "hyperboloid requires eccentricity > 1, got %r" % (self.e,))


@dataclass(frozen=True)
class Paraboloid:
    """Paraboloid of revolution with parabola parameter p > 0."""

    p: float

    def __post_init__(self):
        if self.p <= 0.0:
            raise InvalidCombination("paraboloid requires p > 0")


@dataclass(frozen=True)
class DyonPair:
    """Two fixed dyons on the symmetry axis with electric and magnetic charges."""

    q1: float
    q2: float
    g1: float
    g2: float

    @property
    def q_plus(self):
        return self.q1 + self.q2

    @property
    def q_minus(self):
        return self.q1 - self.q2

    @property
    def g_plus(self):
        return self.g1 + self.g2

    @property
    def g_minus(self):
        return self.g1 - self.g2


@dataclass(frozen=True)
class ParabolicBackground:
    """One dyon at the focus plus parallel uniform electric and magnetic fields."""

    q: float
    g: float
    Efield: float
    B: float


class Dimension(enum.Enum):
    SURFACE2D = "surface"
    AMBIENT3D = "ambient"


Background = Union[None, DyonPair, ParabolicBackground]


@dataclass(frozen=True)
class PhasePoint:
    """Canonical coordinates in the surface chart.

    For 2D models ``u`` is the shape coordinate (eta on the ellipsoid, xi on
    the hyperboloid and paraboloid).  For ambient models ``u`` and ``p_u``
    are the pairs (xi, eta) and (p_xi, p_eta).
    """

    u: Union[float, Tuple[float, float]]
    p_u: Union[float, Tuple[float, float]]
    phi: float = 0.0
    p_phi: float = 0.0


@dataclass(frozen=True)
class SurfaceModel:
    """Validated (surface, background, dimensionality) bundle.

    ``kind`` and ``params`` are the kernel encoding; the charge-dependent
    coefficients (including the p_phi-linear and p_phi-quadratic parts of
    the additive constant) are assembled once here and reused by every
    evaluation.
    """

    surface: Union[Ellipsoid, Hyperboloid, Paraboloid]
    background: Background
    dim: Dimension
    kind: int
    params: Tuple[float, ...]

    @property
    def is_free(self):
        return self.background is None

    def describe(self):
        d = {"dim": self.dim.value}
        s = self.surface
        if isinstance(s, Ellipsoid):
            d["surface"] = {"kind": "ellipsoid", "a": s.a, "e": s.e}
        elif isinstance(s, Hyperboloid):
            d["surface"] = {"kind": "hyperboloid", "a": s.a, "e": s.e}
        else:
            d["surface"] = {"kind": "paraboloid", "p": s.p}
        b = self.background
        if b is None:
            d["background"] = {"kind": "free"}
        elif isinstance(b, DyonPair):
            d["background"] = {"kind": "dyons", "q1": b.q1, "q2": b.q2,
                               "g1": b.g1, "g2": b.g2}
        else:
            d["background"] = {"kind": "dyon_uniform", "q": b.q, "g": b.g,
                               "Efield": b.Efield, "B": b.B}
        return d


@dataclass(frozen=True)
class GaugeSplit:
    """Canonical rewriting H = kinetic + K(u) (p_phi - A_phi(u))^2 + V(u).

    All p_phi dependence sits inside the square, so ``constant_shift`` is
    identically zero for every in-scope model; the field is kept because the
    type is part of the public surface.
    """

    A_phi: Callable
    V: Callable
    constant_shift: float
    form: str


@dataclass(frozen=True)
class ReducibilityReport:
    reducible: bool
    matched_condition: str
    effective_charges: Optional[Tuple[float, float]]


# ---------------------------------------------------------------------------
# Model construction
# ---------------------------------------------------------------------------

def _elliptic_coeffs(a, e, gp, gm, qp, qm, hyperbolic):
    ome = 1.0 - e * e
    if not hyperbolic:
        cg2 = gm * gm
        cmono = gp
        clin = 2.0 * a * qm
        cg0 = e * e * gp * gp / ome + 2.0 * a * qp / e
        cg1 = -2.0 * e * gm / ome
    else:
        cg2 = gp * gp
        cmono = gm
        clin = -2.0 * a * qp
        cg0 = e * e * gm * gm / ome - 2.0 * a * qm / e
        cg1 = -2.0 * e * gp / ome
    return (a, e, cg2, cmono, clin, cg0, cg1)


def _parabolic_coeffs(p, q, g, Ef, B):
    c0 = (4.0 * q + 2.0 * g * g / p + p ** 3 * B * B / 32.0
          - 1.5 * g * B * p + 0.25 * p * p * Ef)
    c1 = -4.0 * g / p
    c2 = 2.0 / p
    return (p, g, B, Ef, c0, c1, c2)


def make_model(surface, background=None, dim=Dimension.SURFACE2D) -> SurfaceModel:
    """Validate a (surface, background, dimensionality) combination."""
    if isinstance(dim, str):
        dim = Dimension(dim)

    elliptic_surface = isinstance(surface, (Ellipsoid, Hyperboloid))
    if not elliptic_surface and not isinstance(surface, Paraboloid):
        raise InvalidCombination("unknown surface spec %r" % (surface,))

    if dim is Dimension.SURFACE2D:
        if elliptic_surface:
            if background is not None and not isinstance(background, DyonPair):
                raise InvalidCombination(
                    "ellipsoid/hyperboloid surfaces pair with a dyon pair or none")
            dp = background or DyonPair(0.0, 0.0, 0.0, 0.0)
            hyperbolic = isinstance(surface, Hyperboloid)
            params = _elliptic_coeffs(surface.a, surface.e, dp.g_plus, dp.g_minus,
                                      dp.q_plus, dp.q_minus, hyperbolic)
            kind = HYP2D if hyperbolic else EL2D
        else:
            if background is not None and not isinstance(background, ParabolicBackground):
                raise InvalidCombination(
                    "paraboloid surfaces pair with a parabolic background or none")
            bg = background or ParabolicBackground(0.0, 0.0, 0.0, 0.0)
            params = _parabolic_coeffs(surface.p, bg.q, bg.g, bg.Efield, bg.B)
            kind = PAR2D
    elif dim is Dimension.AMBIENT3D:
        if elliptic_surface:
            if not isinstance(background, DyonPair):
                raise InvalidCombination(
                    "ambient elliptic model requires a dyon pair background")
            dp = background
            params = (surface.a, dp.g_plus, dp.g_minus, dp.q_plus, dp.q_minus)
            kind = EL3D
        else:
            if not isinstance(background, ParabolicBackground):
                raise InvalidCombination(
                    "ambient parabolic model requires a parabolic background")
            bg = background
            params = (bg.q, bg.g, bg.B, bg.Efield)
            kind = PAR3D
    else:
        raise InvalidCombination("unknown dimensionality %r" % (dim,))

    return SurfaceModel(surface=surface, background=background, dim=dim,
                        kind=kind, params=params)


# ---------------------------------------------------------------------------
# Chart domain helpers
# ---------------------------------------------------------------------------

def chart_interval(m: SurfaceModel):
    """Open interval of the 2D shape coordinate (guard band excluded)."""
    g = TOL.singularity_guard
    if m.kind == EL2D:
        return (-1.0 + g, 1.0 - g)
    if m.kind == HYP2D:
        return (1.0 + g, math.inf)
    if m.kind == PAR2D:
        return (g, math.inf)
    raise DomainError("chart_interval applies to 2D models only")


def _state_vector(m: SurfaceModel, s: PhasePoint):
    if m.dim is Dimension.SURFACE2D:
        return (float(s.u), float(s.p_u))
    xi, eta = s.u
    pxi, peta = s.p_u
    return (float(xi), float(eta), float(pxi), float(peta))


def _check_domain(m: SurfaceModel, s: PhasePoint):
    y = _state_vector(m, s)
    if not core.domain_ok(m.kind, m.params, y, TOL.singularity_guard):
        raise DomainError(
            "phase point %r lies outside the open chart domain" % (s,))
    return y


# ---------------------------------------------------------------------------
# Energy, gradients, radial momentum
# ---------------------------------------------------------------------------

def energy(m: SurfaceModel, s: PhasePoint) -> float:
    """Evaluate the Hamiltonian at a phase point."""
    y = _check_domain(m, s)
    return core.hamiltonian(m.kind, m.params, y, s.p_phi)


def gradients(m: SurfaceModel, s: PhasePoint):
    """Closed-form partial derivatives of the Hamiltonian.

    Returns (dH/du, dH/dp_u, dH/dphi, dH/dp_phi); dH/dphi is exactly zero.
    For ambient models the first two entries are (xi, eta) pairs.
    """
    y = _check_domain(m, s)
    g = core.gradients(m.kind, m.params, y, s.p_phi)
    if m.dim is Dimension.SURFACE2D:
        return (g[0], g[1], 0.0, g[2])
    return ((g[0], g[1]), (g[2], g[3]), 0.0, g[4])


def radial_momentum_squared(m: SurfaceModel, u: float, E: float, p_phi: float) -> float:
    """p_u^2 from the energy equation H = E; negative means forbidden u."""
    if m.dim is not Dimension.SURFACE2D:
        raise DomainError("radial momentum oracle applies to 2D models only")
    lo, hi = chart_interval(m)
    if not lo <= u <= hi:
        raise DomainError("u=%r outside the open chart domain" % (u,))
    return core.radial_psq(m.kind, m.params, u, E, p_phi)


def radial_psq_dE(m: SurfaceModel, u: float) -> float:
    return core.dpsq_dE(m.kind, m.params, u, 0.0)


def radial_psq_dpphi(m: SurfaceModel, u: float, E: float, p_phi: float) -> float:
    return core.dpsq_dpphi(m.kind, m.params, u, E, p_phi)


# ---------------------------------------------------------------------------
# Reducibility
# ---------------------------------------------------------------------------

def classify_reducible(m: SurfaceModel) -> ReducibilityReport:
    """Decide whether the background leaves the radial integral free-form.

    The conditions are exact equalities on the charges.
    """
    if m.dim is not Dimension.SURFACE2D:
        raise InvalidCombination("reducibility applies to 2D surface models")
    b = m.background
    if b is None:
        raise InvalidCombination("free models have no background to classify")
    if m.kind == EL2D:
        ok = b.q_minus == 0.0 and b.g_plus == 0.0
        return ReducibilityReport(
            reducible=ok,
            matched_condition="q1 = q2 and g1 = -g2 (equal electric charges, "
                              "opposite magnetic charges: an axial magnetic dipole)",
            effective_charges=(b.q1, b.g1) if ok else None)
    if m.kind == HYP2D:
        ok = b.q_plus == 0.0 and b.g_minus == 0.0
        return ReducibilityReport(
            reducible=ok,
            matched_condition="q1 = -q2 and g1 = g2 (an axial electric dipole "
                              "with equal magnetic charges)",
            effective_charges=(b.q1, b.g1) if ok else None)
    ok = b.Efield == 0.0 and b.B == 0.0
    return ReducibilityReport(
        reducible=ok,
        matched_condition="vanishing uniform fields (Efield = 0 and B = 0)",
        effective_charges=(b.q, b.g) if ok else None)


# ---------------------------------------------------------------------------
# Gauge split
# ---------------------------------------------------------------------------

def gauge_split(m: SurfaceModel) -> GaugeSplit:
    """Split the Hamiltonian into (p_phi - A_phi)^2 form plus a scalar potential.

    Reducible configurations get the compact reduced pair; general
    configurations get the full closed form, which divides by g_minus
    (ellipsoid), g_plus (hyperboloid) or B (paraboloid) and raises
    GaugeUndefined when that divisor vanishes.
    """
    if m.dim is not Dimension.SURFACE2D:
        raise GaugeUndefined("gauge split applies to 2D surface models")
    b = m.background
    if b is None:
        return GaugeSplit(A_phi=lambda u: 0.0 * u, V=lambda u: 0.0 * u,
                          constant_shift=0.0, form="trivial")

    if m.kind in (EL2D, HYP2D):
        a = m.surface.a
        e = m.surface.e
        ome = 1.0 - e * e
        red = classify_reducible(m)
        if red.reducible:
            q, g = red.effective_charges
            sign = 1.0 if m.kind == EL2D else -1.0

            def A_phi(u):
                return 2.0 * e * g * (1.0 - u * u) / (1.0 - e * e * u * u)

            def V(u):
                X = 1.0 - u * u
                D = 1.0 - e * e * u * u
                return (4.0 * g * g * (1.0 + e * e * ((1.0 + e * e - u * u) * u * u - 2.0))
                        / (ome * X * D) + sign * 4.0 * a * q / e)

            return GaugeSplit(A_phi=A_phi, V=V, constant_shift=0.0, form="reduced")

        if m.kind == EL2D:
            gmain, gother = b.g_minus, b.g_plus
            qlin, qconst = b.q_minus, b.q_plus
            sign = 1.0
        else:
            gmain, gother = b.g_plus, b.g_minus
            qlin, qconst = b.q_plus, b.q_minus
            sign = -1.0
        if gmain == 0.0:
            raise GaugeUndefined(
                "general split needs a nonzero %s" %
                ("g1 - g2" if m.kind == EL2D else "g1 + g2"))
        gstar = gother * ome / (2.0 * e * gmain)

        def A_phi(u):
            return (e * gmain * (1.0 + gstar * gstar - (u - gstar) ** 2)
                    / (1.0 - e * e * u * u))

        def V(u):
            X = 1.0 - u * u
            D = 1.0 - e * e * u * u
            core_term = (gmain * gmain
                         * (ome * D - e * e * (1.0 + 2.0 * gstar * u - u * u) ** 2)
                         / (ome * X * D))
            return (2.0 * a * qlin * u * sign + core_term
                    + e * e * gother * gother / ome + sign * 2.0 * a * qconst / e)

        return GaugeSplit(A_phi=A_phi, V=V, constant_shift=0.0, form="general")

    # paraboloid
    p = m.surface.p
    q, g, Ef, B = b.q, b.g, b.Efield, b.B
    red = classify_reducible(m)
    if red.reducible:
        def A_phi(u):
            return g * (u - 0.5 * p) / (u + 0.5 * p)

        def V(u):
            return 8.0 * g * g / (2.0 * u + p) + 4.0 * q

        return GaugeSplit(A_phi=A_phi, V=V, constant_shift=0.0, form="reduced")
    if B == 0.0:
        raise GaugeUndefined("general paraboloid split needs a nonzero B")

    def A_phi(u):
        return g * (2.0 * u - p) / (p + 2.0 * u) + 0.25 * p * B * u

    def V(u):
        w = 2.0 * u - p
        return (8.0 * g * g / (p + 2.0 * u) + 4.0 * q + g * B * w
                - 0.25 * Ef * w * (2.0 * u + p)
                + B * B / 32.0 * w * w * (2.0 * u + p))

    return GaugeSplit(A_phi=A_phi, V=V, constant_shift=0.0, form="general")


def canonical_energy(m: SurfaceModel, s: PhasePoint, split: Optional[GaugeSplit] = None) -> float:
    """Evaluate the gauge-split (canonical) form of the Hamiltonian."""
    if split is None:
        split = gauge_split(m)
    u = float(s.u)
    pu = float(s.p_u)
    pphi = s.p_phi
    shifted = pphi - split.A_phi(u)
    if m.kind in (EL2D, HYP2D):
        a = m.surface.a
        e = m.surface.e
        X = 1.0 - u * u
        D = 1.0 - e * e * u * u
        braces = (X * pu * pu + D * shifted * shifted / ((1.0 - e * e) * X)
                  + split.V(u))
        return e * e / (2.0 * a * a * D) * braces + split.constant_shift
    p = m.surface.p
    braces = (4.0 * u * pu * pu + (p + 2.0 * u) * shifted * shifted / (p * u)
              + split.V(u))
    return braces / (p + 2.0 * u) + split.constant_shift


# ---------------------------------------------------------------------------
# Restriction of ambient models
# ---------------------------------------------------------------------------

def restrict_3d(m3: SurfaceModel, fixed: float) -> SurfaceModel:
    """Freeze one separable coordinate of an ambient model at ``fixed``.

    Elliptic chart: a value above 1 is a frozen xi (ellipsoid, e = 1/fixed);
    a value in (0, 1) is a frozen eta (hyperboloid, e = 1/fixed).  Parabolic
    chart: a positive value is a frozen eta (paraboloid, p = 2*fixed).  The
    two elliptic ranges are disjoint, so the target chart is inferred.
    """
    if m3.dim is not Dimension.AMBIENT3D:
        raise InvalidRestriction("restriction applies to ambient models only")
    if m3.kind == EL3D:
        a = m3.surface.a
        if fixed > 1.0:
            return make_model(Ellipsoid(a=a, e=1.0 / fixed), m3.background)
        if 0.0 < fixed < 1.0:
            return make_model(Hyperboloid(a=a, e=1.0 / fixed), m3.background)
        raise InvalidRestriction(
            "fixed coordinate %r matches no elliptic chart range" % (fixed,))
    if fixed > 0.0:
        return make_model(Paraboloid(p=2.0 * fixed), m3.background)
    raise InvalidRestriction("fixed parabolic coordinate must be positive")
