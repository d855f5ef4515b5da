"""Exception hierarchy.

Every error raised by the library derives from :class:`EcsError`, which is a
``ValueError`` so callers that only care about bad input can catch that.
"""


class EcsError(ValueError):
    pass


# pseudo
class DegenerateGram(EcsError):
    pass


class NotSelfAdjoint(EcsError):
    pass


class NotTraceless(EcsError):
    pass


class ZeroOperator(EcsError):
    pass


# planewave / profiles
class OutOfInterval(EcsError):
    pass


class IntervalMismatch(EcsError):
    pass


class ConstantProfile(EcsError):
    pass


class StepTooLarge(EcsError):
    pass


class NondegenerateCheckFailed(EcsError):
    pass


# isometry
class InvalidSigma(EcsError):
    """A triple (q, p, C) fails one of the defining conditions of S.

    ``invariant`` names the failed condition.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class InvalidKilling(EcsError):
    pass


class SpecMismatch(EcsError):
    pass


# symplectic
class IntervalViolation(EcsError):
    pass


class StepFailure(EcsError):
    pass


class ResidualTooLarge(EcsError):
    pass


class DimensionMismatch(EcsError):
    pass


class NotInvariant(EcsError):
    pass


# quotient
class SigmaMismatch(EcsError):
    pass


class UnclassifiableSigma(EcsError):
    pass


# construct
class NoSystemFound(EcsError):
    pass


class EigenOrderingAmbiguous(EcsError):
    pass


class CyclicVectorFailure(EcsError):
    pass


class CertificateFailed(EcsError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SearchExhausted(EcsError):
    pass


class ComplexMultipliers(EcsError):
    pass


class FloquetGap(EcsError):
    pass


class ConstantTrace(EcsError):
    pass


class BadPolynomial(EcsError):
    pass


# serialization
class SchemaError(EcsError):
    pass
