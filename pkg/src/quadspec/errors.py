"""Exception hierarchy shared by all modules."""


class QuadspecError(Exception):
    """Base class for library errors."""


class ValidationError(QuadspecError, ValueError):
    """Malformed input: bad measure data, angles out of range, bad geometry."""


class SingularParameterError(QuadspecError):
    """The spectral parameter sits on the spectrum (or at a forbidden point)."""


class BoundaryCollisionError(QuadspecError):
    """A root lies within tolerance of a search-window endpoint."""


class ConvergenceError(QuadspecError):
    """A numerical certification step could not be completed."""


class PreconditionError(QuadspecError):
    """An operation was called outside the regime where its identity holds."""
