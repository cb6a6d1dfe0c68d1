"""Shared exception types.

The CLI maps these onto exit codes: format errors exit 2, budget errors
exit 3.  Everything else is an ordinary failure.
"""


class CkgamesError(Exception):
    """Base class for all errors raised by this package."""


class GameFormatError(CkgamesError):
    """Malformed input document or ill-formed graph handed to an operation."""


class BudgetExceededError(CkgamesError):
    """An exploration budget ran out before the query could be decided.

    This is deliberately distinct from a negative answer: callers must
    never interpret it as a boolean.
    """

    def __init__(self, message, explored=None):
        super().__init__(message)
        self.explored = explored


class NotRcksError(CkgamesError):
    """An operation that requires recurring common knowledge of the state
    was applied to a game without it."""


class NotWinningError(CkgamesError):
    """A strategy handed in for transfer or spoiling does not win from the
    position it was asked to win from."""
