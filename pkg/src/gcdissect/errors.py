"""Package exception hierarchy."""

from __future__ import annotations


class GcError(Exception):
    """Base for all errors raised by this package."""


class InvalidQuadrangleError(GcError):
    """Input points do not form a convex quadrangle in general position."""


class AmbiguousGeometryError(GcError):
    """Float input too close to a degenerate configuration to classify."""


class GlueingError(GcError):
    """Requested glueing pattern is impossible; message names the rule."""


class UnrealizableError(GcError):
    """Requested dissection does not exist for these parameters."""


class SearchCapError(GcError):
    """Search size exceeds the configured cap."""


class PlanFormatError(GcError):
    """A plan document does not follow the serialization format."""
