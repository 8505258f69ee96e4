"""Exception types shared by every module."""


class FFDigitError(ValueError):
    """Base class for all library errors (usage or precondition problems)."""


class NotPrime(FFDigitError):
    pass


class NotIrreducible(FFDigitError):
    pass


class SingularBasis(FFDigitError):
    pass


class FieldTooLarge(FFDigitError):
    pass


class InvalidParameter(FFDigitError):
    pass


class DivisionByZero(FFDigitError, ZeroDivisionError):
    pass


class DegreeOutOfRange(FFDigitError):
    pass


class ShapeMismatch(FFDigitError):
    pass


class CensusTooLarge(FFDigitError):
    pass


class TooManyCoefficientVectors(FFDigitError):
    pass


class PreconditionViolated(FFDigitError):
    pass


class NoDependence(Exception):
    """The given vectors are linearly independent over F_p."""


class VerificationFailed(AssertionError):
    """A construction produced something that brute force refuses to confirm."""


class PartitionError(AssertionError):
    """A census did not add up to the field size."""
