"""Exception types raised by the geometry routines."""


class GeometryError(Exception):
    """Base class for all errors raised by :mod:`lckhopf`."""


class SingularMetric(GeometryError):
    """The metric is degenerate where an inverse is required."""


class OutsideOverlap(GeometryError):
    """A chart transition was requested outside the chart overlap."""


class OutsideChart(GeometryError):
    """An ambient point does not lie in the requested chart."""


class ModeCapExceeded(GeometryError):
    """A variation field carries Fourier modes beyond the allowed cap."""


class PreconditionViolated(GeometryError):
    """An operation was called outside its domain of validity."""


class StepTooLarge(GeometryError):
    """The integration window reaches the pole of the closed-form solution."""


class NotNormal(GeometryError):
    """A field that should be normal to the fiber has a tangential part."""
