"""Exception hierarchy shared by every module."""


class BetaError(Exception):
    """Base class for all library errors."""


class ParseError(BetaError, ValueError):
    pass


class RefinementCapExceeded(BetaError):
    pass


class DomainError(BetaError, ValueError):
    """Input lies outside the domain where an expansion exists."""


class PrecisionExhausted(BetaError):
    """A comparison stayed unresolved at the refinement cap."""


class InadmissiblePrefix(BetaError, ValueError):
    pass


class AlphaTooShort(BetaError):
    """The quasi-greedy expansion of 1 is only known to a prefix too short for the request."""


class EnumerationCap(BetaError):
    pass


class NotFiniteExpansion(BetaError, ValueError):
    pass


class WitnessNotFound(BetaError):
    pass


class InvalidR(BetaError, ValueError):
    pass


class CaseMismatch(BetaError, ValueError):
    pass


class DegeneratePairs(BetaError, ValueError):
    pass
