"""Exception hierarchy for the quadric-landau package."""


class QuadricLandauError(Exception):
    """Base class for all package errors."""


class DomainError(QuadricLandauError):
    """Phase point touches a chart singularity or lies outside the chart."""


class InvalidCombination(QuadricLandauError):
    """Surface / background / dimensionality combination is not valid."""


class InvalidRestriction(QuadricLandauError):
    """Fixed coordinate value is outside the range of any restrictable chart."""


class GaugeUndefined(QuadricLandauError):
    """The closed-form gauge split divides by a vanishing charge combination."""


class NotReducible(QuadricLandauError):
    """Operation requires a free or reducible background configuration."""


class ComplexRoots(QuadricLandauError):
    """Turning-point discriminant is negative."""


class NoBoundMotion(QuadricLandauError):
    """No bounded classically allowed band exists for the given constants."""


class UnboundMotion(QuadricLandauError):
    """Trajectory shows no radial turning within the search horizon."""


class ForbiddenRegion(QuadricLandauError):
    """Requested quadrature interval leaves the classically allowed band."""


class SingularityReached(QuadricLandauError):
    """Integration stopped inside the chart guard band.

    Carries the partial trajectory on the ``trajectory`` attribute.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StepSizeUnderflow(QuadricLandauError):
    """Adaptive step size fell below the floor without domain violation."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class DivergentIntegral(QuadricLandauError):
    """Euler-integral convergence conditions are violated."""


class Nonconvergent(QuadricLandauError):
    """Series evaluated outside its convergence domain."""


class SchemaMismatch(QuadricLandauError):
    """Compared output files do not share a common schema."""
