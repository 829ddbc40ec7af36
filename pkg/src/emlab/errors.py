"""Exception hierarchy shared by every emlab module."""


class EmlabError(Exception):
    """Base class for all emlab errors."""


class ParseError(EmlabError, ValueError):
    pass


class CanonicalityError(EmlabError, ValueError):
    """A written ordinal sum cannot be brought into Cantor normal form."""


class NotCNFOrder(EmlabError, ValueError):
    """Parts of a sum are not in non-increasing exponent order."""


class ResourceLimit(EmlabError):
    """A configured cap (coefficient, digit budget, enumeration budget) was hit."""


class BudgetExceeded(ResourceLimit):
    pass


class PreconditionError(EmlabError, ValueError):
    pass


class InsufficientLargeness(EmlabError):
    pass


class NotSubset(EmlabError, ValueError):
    pass


class GroundMismatch(EmlabError, ValueError):
    pass


class ColorOutOfRange(EmlabError, ValueError):
    pass


class WindowOutOfRange(EmlabError, ValueError):
    pass


class BoxTooSmall(EmlabError, ValueError):
    pass


class Shortfall(EmlabError):
    """A constructive extractor ran out of material.

    ``partial`` carries whatever was built before the shortfall.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InsufficientInput(Shortfall):
    pass


class ChainStalled(Shortfall):
    pass


class SplitFailed(Shortfall):
    def __init__(self, message, round_index, partial=None):
        super().__init__(message, partial)
        self.round_index = round_index


class GroupingShortfall(Shortfall):
    pass


class VerificationFailed(EmlabError):
    """A constructed object failed its own post-check.

    This never happens when the underlying combinatorial claim is true, so it
    is raised rather than reported.
    """
