"""Exception types raised by the geometry toolkit."""


class GeometryError(Exception):
    """Base class for all toolkit errors."""


class DegenerateLine(GeometryError):
    """Two projectively equal points cannot span a line."""


class IdenticalCurves(GeometryError):
    """An operation requiring distinct curves received identical ones."""


class NonIsolatedFamily(GeometryError):
    """Solutions fill a positive-dimensional region of the parameter
    square instead of isolated branches; sampling them would be
    meaningless, so the condition is reported instead.
    """

    def __init__(self, occupied_fraction, message=None):
        self.occupied_fraction = occupied_fraction
        super().__init__(
            message
            or f"solution set fills {occupied_fraction:.0%} of the seed grid"
        )


class DegenerateCircle(GeometryError):
    """Collinear or coincident data cannot define a circle."""


class DegenerateConic(GeometryError):
    """Samples do not determine a nondegenerate conic."""


class NotIncident(GeometryError):
    """A point expected on a curve does not lie on it."""


class NotAQuadric(GeometryError):
    """Surface degree exceeds 2 where a quadric is required."""


class NotACyclideCandidate(GeometryError):
    """Surface degree exceeds 4; the quartic decomposition is undefined."""


class PlaneInSurface(GeometryError):
    """The section plane is contained in the surface's zero set."""


class EmptySection(GeometryError):
    """The real section of the surface by the plane is empty."""


class DegreeCap(GeometryError):
    """An operation would exceed the supported polynomial degree."""


class OutsideImage(GeometryError):
    """Point outside the closed unit ball has no inverse image."""


class NotACircleFamily(GeometryError):
    """A curve family declared as circles failed the circle fit."""


class NotALineFamily(GeometryError):
    """A curve family declared as lines has non-collinear samples."""


class NoAlgebraicModel(GeometryError):
    """No implicit polynomial of degree <= 4 fits the samples."""


class NoGenericPoint(GeometryError):
    """No transversal incidence was found on the sampled curves."""


class OpenCurve(GeometryError):
    """A loop operation received a curve whose endpoints do not match."""


class UndersampledLoop(GeometryError):
    """Consecutive chart steps are too large to unwrap reliably."""


class SelfIntersectingTorus(GeometryError):
    """Torus construction requires major radius > minor radius > 0."""
