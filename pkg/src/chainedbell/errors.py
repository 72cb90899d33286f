"""Exception hierarchy shared by the chainedbell modules.

The command line maps these onto process exit codes: validation problems
(:class:`InvalidInputError` and its subclasses) exit with status 2, I/O
problems with status 3, and a reconstruction that fails to converge with
status 4.
"""

from __future__ import annotations

__all__ = [
    "ChainedBellError",
    "InvalidInputError",
    "ParseError",
    "IncompleteDataError",
    "DegenerateGroupError",
    "UndefinedConditionalError",
    "SignalingError",
    "UnderdeterminedError",
]


class ChainedBellError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(ChainedBellError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(InvalidInputError):
    """A data file is malformed.

    Parameters
    ----------
    message:
        Human-readable description of the problem.
    line:
        1-based line number within the file, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IncompleteDataError(InvalidInputError):
    """A dataset is missing rows, slots, or groups required for analysis."""


class DegenerateGroupError(InvalidInputError):
    """All four coincidence slots of a group are zero, so no probability exists."""


class UndefinedConditionalError(InvalidInputError):
    """A conditional distribution was requested given a zero-probability event."""


class SignalingError(InvalidInputError):
    """A conditional distribution violates the no-signaling marginal conditions."""


class UnderdeterminedError(InvalidInputError):
    """Too few linearly independent settings to reconstruct a density matrix."""
