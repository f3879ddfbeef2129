"""Exception types shared across the package."""


class LiftGeomError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LiftGeomError):
    """A function was evaluated outside its mathematical domain.

    Raised instead of silently producing NaN (ln/sqrt of a non-positive
    argument, division by a zero-valued jet, fractional power of a
    non-positive base, value query on a gradient-specified field).
    """


class ParseError(LiftGeomError):
    """Syntax error or unknown name in an expression or scenario file."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None
                         else f"{message} (at position {position})")
        self.position = position


class GeometryError(LiftGeomError):
    """Geometric precondition violated: non-SPD metric, point outside the
    chart domain, degenerate alignment vector, vanishing gradient where a
    gradient-aligned frame is required."""


class ScenarioError(LiftGeomError):
    """Malformed or inconsistent scenario description."""
