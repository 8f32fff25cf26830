"""Exception types shared across the package."""


class EllipsingError(ValueError):
    """Base class for all validation errors raised by this package."""


class GraphFormatError(EllipsingError):
    """A graph text file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotNegativeDefiniteError(EllipsingError):
    """The intersection form of a graph is not negative definite."""


class ClassExpressionError(EllipsingError):
    """A singularity class expression is malformed or violates its invariants."""


class FixtureError(EllipsingError):
    """A built-in fixture failed its self-verification."""
