"""Exception hierarchy shared by all modules.

Every error raised on purpose by this package derives from RotaOpsError, so
callers (in particular the CLI) can map failures to stable exit codes.
"""


class RotaOpsError(Exception):
    """Base class for all errors raised by rotaops."""


class DivisionByZeroError(RotaOpsError):
    """Exact division by a zero scalar or zero polynomial."""


class PoleError(RotaOpsError):
    """Evaluation of a rational function at a zero of its denominator."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"evaluation at pole {point}")


class VariableMismatchError(RotaOpsError):
    """Binary operation on polynomials in different variables."""


class DimsMismatchError(RotaOpsError):
    """Operation on algebra elements or operators of different dimension."""


class IndexRangeError(RotaOpsError):
    """Basis index outside 1..n."""


class ParameterError(RotaOpsError):
    """Family parameters outside the range a constructor supports."""


class SingularParameterError(RotaOpsError):
    """Parameter value hits a pole of a closed-form family.

    Carries the basis index whose formula degenerates, so diagnostics can
    name the exact place the denominator vanished.
    """

    def __init__(self, index, param, value, message=None):
        self.index = index
        self.param = param
        self.value = value
        super().__init__(
            message
            or f"singular parameter {param}={value}: denominator vanishes at index {index}"
        )


class UnclassifiedRegimeError(RotaOpsError):
    """Request for a classification in a regime with no complete theorem."""


class UnsupportedIdentityError(RotaOpsError):
    """Identity kind outside what an operation supports."""
