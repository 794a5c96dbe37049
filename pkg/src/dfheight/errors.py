"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class DFHeightError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(DFHeightError, ValueError):
    """An operation's input violates a documented precondition.

    ``index`` names the offending sequence index when there is one.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class SingularRecurrenceError(PreconditionError):
    """The leading recurrence coefficient vanishes where no seed was given."""


class UnsupportedFieldError(DFHeightError):
    """A value falls outside the exactly supported fields (Q and Q(zeta_N))."""


class ToleranceNotReached(DFHeightError):
    """A certified enclosure could not be tightened within the budget."""

    def __init__(self, message: str, enclosure):
        super().__init__(message)
        self.enclosure = enclosure


class BetaIdentityError(DFHeightError):
    """A witness formula is inconsistent with the supplied differential equation."""

    def __init__(self, message: str, r: int):
        super().__init__(message)
        self.r = r


class FormatError(DFHeightError, ValueError):
    """Malformed serialized input; ``field`` is a path to the first bad field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
