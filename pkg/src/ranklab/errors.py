"""Exception hierarchy shared by every ranklab module."""


class RanklabError(Exception):
    """Base class for all ranklab errors."""


class ParseError(RanklabError):
    """Malformed CSV or configuration input.

    ``row`` is the 1-based line number in the source text when known.
    """

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class DuplicateKeyError(ParseError):
    pass


class DomainError(RanklabError, ValueError):
    """An input is well formed but outside the admissible domain."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class InsufficientDataError(DomainError):
    pass


class AlignmentError(DomainError):
    pass


class SingularityError(DomainError):
    pass


class UndefinedStatisticError(DomainError):
    pass


class StationarityError(DomainError):
    """Raised when a partial sum alpha_1 + ... + alpha_k is not negative."""

    def __init__(self, k, partial_sum):
        terms = "alpha_1" if k == 1 else f"alpha_1 + ... + alpha_{k}"
        super().__init__(f"not stationary: {terms} = {partial_sum:.6g} >= 0")
        self.k = k
        self.partial_sum = partial_sum


class NumericalBlowupError(RanklabError):
    def __init__(self, step):
        super().__init__(f"non-finite log price detected at integration step {step}")
        self.step = step
