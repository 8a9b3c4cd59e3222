"""Exception hierarchy shared by every module and surfaced through CLI exit codes
and API error payloads."""

from __future__ import annotations


class CascadeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CascadeError):
    """An input violated a domain invariant (bad probability, duplicate id, ...)."""


class NotFoundError(CascadeError):
    """A referenced model, scenario or factor does not exist."""


class InfeasibleError(CascadeError):
    """A solver target cannot be reached; carries the best achievable value."""

    def __init__(self, message: str, max_achievable: float):
        super().__init__(message)
        self.max_achievable = max_achievable


class StorageError(CascadeError):
    """A document could not be read, parsed or durably written."""
