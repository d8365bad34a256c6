"""Exception types shared across convlab.

Every error that the CLI maps to an exit code derives from ConvlabError and
carries the exit status in ``exit_code``.
"""


class ConvlabError(Exception):
    exit_code = 2


class InvalidInput(ConvlabError, ValueError):
    exit_code = 2


class ReduciblePolynomial(InvalidInput):
    pass


class NoRootInInterval(InvalidInput):
    pass


class MultipleRootsInInterval(InvalidInput):
    pass


class NotARecurrence(InvalidInput):
    pass


class InsufficientTerms(InvalidInput):
    pass


class UnsupportedSparsity(InvalidInput):
    pass


class HypothesisViolation(InvalidInput):
    pass


class PrecisionExhausted(ConvlabError):
    exit_code = 3

    def __init__(self, message, index=None, bits=None):
        super().__init__(message)
        self.index = index
        self.bits = bits


class VerificationFailure(ConvlabError):
    exit_code = 4


class IdentityViolation(VerificationFailure):
    pass


class GammaSearchExhausted(ConvlabError):
    exit_code = 3


class StageSelectionExhausted(ConvlabError):
    exit_code = 3


class ConstructionTooLarge(ConvlabError):
    """A construction step would produce an integer beyond the configured bit cap."""

    exit_code = 3
