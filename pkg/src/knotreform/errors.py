"""Exception types shared across the package."""


class KnotReformError(Exception):
    """Base class for all package errors."""


class ZeroDenominator(KnotReformError, ZeroDivisionError):
    pass


class NotZExpressible(KnotReformError, ValueError):
    """Raised when a Laurent polynomial cannot be written in z = (q^1/2 - q^-1/2)^2."""


class EssentialSingularity(KnotReformError, ValueError):
    """Raised when a rational function has no Laurent expansion in y over Q[l^1/2, l^-1/2]."""


class SizeMismatch(KnotReformError, ValueError):
    pass


class NotDivisible(KnotReformError, ValueError):
    pass


class IncompleteTable(KnotReformError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownFixture(KnotReformError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BadConstantTerm(KnotReformError, ValueError):
    pass


class TruncationMismatch(KnotReformError, ValueError):
    """Two formal series with different (L, lmax) contexts were combined."""


class SingularMatrix(KnotReformError, ArithmeticError):
    pass


class ConjectureViolation(KnotReformError):
    """The integrality structure failed for one representation tuple.

    ``stage`` names the extraction step that failed and ``witness`` holds the
    offending value.
    """

    def __init__(self, reps, stage, witness=None, detail=""):
        self.reps = reps
        self.stage = stage
        self.witness = witness
        self.detail = detail
        super().__init__(f"conjecture violated for {reps} at stage {stage!r}: {detail}")


class StructureViolation(KnotReformError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class ResidualQDependence(KnotReformError, ValueError):
    pass


class ConsistencyViolation(KnotReformError):
    pass


class ParseError(KnotReformError, ValueError):
    """Expression parse failure at byte ``offset``; ``expected`` lists acceptable tokens."""

    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{exp}")


class SchemaError(KnotReformError, ValueError):
    pass
