"""Exception hierarchy.

Every error raised by the library derives from :class:`EigenIdError`. The
CLI maps the four families below onto its exit codes.
"""


class EigenIdError(Exception):
    """Base class for all library errors."""


# -- validation (exit 1) ---------------------------------------------------

class ValidationError(EigenIdError, ValueError):
    pass


class NotSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    def __init__(self, max_deviation, tolerance):
        self.max_deviation = float(max_deviation)
        self.tolerance = float(tolerance)
        super().__init__(
            f"matrix is not Hermitian: max deviation {self.max_deviation:.3e} "
            f"exceeds tolerance {self.tolerance:.3e}"
        )


class IndexOutOfRange(ValidationError, IndexError):
    pass


class DimensionTooSmall(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class CardinalityMismatch(ValidationError):
    pass


# -- numerical failure (exit 3) --------------------------------------------

class NoConvergence(EigenIdError, ArithmeticError):
    pass


# -- method preconditions (exit 4) -----------------------------------------

class PreconditionError(EigenIdError, ArithmeticError):
    pass


class DegenerateEigenvalue(PreconditionError):
    pass


class DegenerateSpectrum(PreconditionError):
    pass


class InterlacingViolation(PreconditionError):
    pass


class SingularShift(PreconditionError):
    pass


class IllConditioned(PreconditionError):
    pass


class ProbeTooCloseToPole(PreconditionError):
    pass
