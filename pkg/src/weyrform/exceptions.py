"""Exception hierarchy.

Shape and field errors derive from :class:`ValueError` so that callers that
only care about "bad input" can catch the builtin.
"""


class WeyrFormError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(WeyrFormError, ValueError):
    """Matrix dimensions do not fit the requested operation."""


class FieldMismatchError(WeyrFormError, ValueError):
    """Operands live over different fields."""


class SingularMatrixError(WeyrFormError, ValueError):
    """A matrix that must be invertible is not."""


class StructureError(WeyrFormError, ValueError):
    """Invalid Segre/Weyr data, or a matrix that does not match it."""


class PreconditionError(WeyrFormError, ValueError):
    """Input violates a documented precondition of the reduction."""


class NotNilpotentError(PreconditionError):
    pass


class NotCommutingError(PreconditionError):
    pass


class KernelDimensionError(PreconditionError):
    def __init__(self, dimension):
        self.dimension = dimension
        super().__init__(f"common kernel dimension {dimension}")


class ReductionError(WeyrFormError, RuntimeError):
    """An internal invariant of the reduction failed.

    Raised loudly instead of repairing the matrix; it signals either a
    violated precondition that slipped through or a bug.
    """
