"""Exception types shared across the NPCA toolkit."""

from typing import Optional


class NpcaError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(NpcaError, ValueError):
    """An input lies outside the region where a model is defined."""


class SolverError(NpcaError, RuntimeError):
    """An iterative solver failed to reach its tolerance."""


class ConfigError(NpcaError):
    """A configuration document is missing a key or holds a bad value."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class UsageError(NpcaError):
    """A command-line argument violates its documented bound."""
