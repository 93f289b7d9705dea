"""Exception hierarchy.

Every error carries enough context to be reported by the CLI; the
``exit_code`` attribute maps onto the command-line exit codes.
"""


class HypGrowthError(Exception):
    exit_code = 2


class ModelMismatchError(HypGrowthError):
    pass


class InvalidPointError(HypGrowthError):
    pass


class DegenerateGeodesicError(HypGrowthError):
    pass


class PreconditionError(HypGrowthError):
    pass


class ClassificationError(PreconditionError):
    """Raised when an operation needs a hyperbolic element and gets something else."""


class HypothesisNotSatisfied(PreconditionError):
    """A lemma hypothesis failed; callers usually record a skip."""


class UnsupportedCenterError(HypGrowthError):
    pass


class SeparationViolation(HypGrowthError):
    pass


class DichotomyViolation(HypGrowthError):
    exit_code = 1


class PresetError(HypGrowthError):
    pass


class WordParseError(HypGrowthError):
    pass


class CapExceeded(HypGrowthError):
    """Enumeration hit its cap. ``partial`` holds whatever completed."""

    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class K1Uncertified(CapExceeded):
    pass


class N0Uncertified(CapExceeded):
    pass


class NotFound(HypGrowthError):
    exit_code = 3


class K1TooSmall(HypGrowthError):
    exit_code = 1


class VerificationFailure(HypGrowthError):
    """A check failed; ``witness`` is a replayable description."""

    exit_code = 1

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NestingFailure(VerificationFailure):
    pass


class RelationFound(VerificationFailure):
    pass


class VirtuallyCyclic(HypGrowthError):
    """The witness's endpoint pair is preserved by every generator."""

    exit_code = 0
