"""Exception types shared across the toolkit.

All geometric failure modes raise subclasses of :class:`GeometryError` so
callers (and the CLI) can distinguish bad input data from genuinely
degenerate configurations.
"""


class GeometryError(ValueError):
    """Base class for domain/configuration errors raised by the toolkit."""


class SingularConfigurationError(GeometryError):
    """A Jacobian or conversion was requested at a configuration where it
    is undefined (e.g. gimbal lock of the Euler parameterization, or a
    rotation whose third column is parallel to the z axis in the
    axis-angle factorization)."""


class NearPiRotationError(GeometryError):
    """A logarithm or error term was requested for a rotation whose angle
    is within the unstable band just below pi, where the required Jacobian
    factors blow up."""


class BehindCameraError(GeometryError):
    """A point with non-positive (or numerically vanishing) depth was
    passed to the pinhole projection."""


class RankDeficiencyError(GeometryError):
    """The pose-graph normal equations are rank deficient: some connected
    component of free vertices is not tied to any fixed vertex."""
