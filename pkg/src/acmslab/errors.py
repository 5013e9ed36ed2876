"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one thing, while tests can pin the precise failure.
"""


class GeometryError(ValueError):
    """Base class for all domain-specific failures."""


class ShapeError(GeometryError):
    """Array shapes or dimensions do not match."""


class DegenerateInputError(GeometryError):
    """Input is numerically degenerate: rank-deficient, non-positive-definite,
    or otherwise outside the operation's domain."""


class PreconditionError(GeometryError):
    """A documented precondition of the operation is violated."""


class SearchError(GeometryError):
    """A constructive search (generic vector, witness, deflation pivot)
    exhausted its candidates."""


class ChartFormatError(GeometryError):
    """A chart file or chart definition is malformed."""
