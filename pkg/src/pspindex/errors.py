"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PSPError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PSPError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VertexRangeError(PSPError, IndexError):
    """A vertex id outside ``[0, n)`` was supplied."""


class UpdateContractError(PSPError, ValueError):
    """An update whose kind does not match the current state of the graph."""


class EdgeNotFoundError(PSPError, KeyError):
    pass


class InfeasibleStratumError(PSPError, ValueError):
    """A query stratum that cannot be populated on the given graph/partition."""


class InvalidPartitionError(PSPError, ValueError):
    pass


class IncompleteOverlayError(PSPError, ValueError):
    """Shortcut weights were missing for a pair the overlay requires."""


class NotIndexedError(PSPError, KeyError):
    """A query referenced a vertex the index does not cover."""


class ConfigError(PSPError, ValueError):
    pass
