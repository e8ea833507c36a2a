"""Exception hierarchy shared by the solvers and the CLI."""

from __future__ import annotations


class DiracDeltaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DiracDeltaError, ValueError):
    """An argument lies outside the domain of an operation."""


class InconsistencyError(DiracDeltaError):
    """Input data violates an invariant it is required to satisfy (e.g. unitarity)."""


class DegenerateBasisError(DiracDeltaError):
    """The plane-wave basis is singular (only happens at k = 0)."""


class TransmissionPoleError(DiracDeltaError):
    """The transmission amplitude has a pole at the requested real momentum."""


class ConfigError(DiracDeltaError):
    """Invalid job configuration. ``line`` is the 1-based config line when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        where = ""
        if source is not None and line is not None:
            where = f"{source}:{line}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
