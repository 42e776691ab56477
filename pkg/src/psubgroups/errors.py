"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class PSubgroupsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(PSubgroupsError, ValueError):
    pass


class DegreeMismatchError(InvalidArgumentError):
    pass


class InvalidSpecError(InvalidArgumentError):
    pass


class ContainmentError(InvalidArgumentError):
    """A subgroup argument is not contained in the group it is used with."""


class InvalidActionError(InvalidArgumentError):
    """A semidirect action map does not define automorphisms."""


class CapacityError(PSubgroupsError):
    """A computation would exceed a configured size bound.

    ``bound`` names the limit that was hit so callers can report it.
    """

    def __init__(self, message: str, bound: str = ""):
        super().__init__(message)
        self.bound = bound


class ParseError(PSubgroupsError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = ""):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        if line:
            where += f"{line}:{column}: "
        super().__init__(where + message)
        self.message = message
