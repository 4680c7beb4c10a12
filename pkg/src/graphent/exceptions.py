"""Shared exception types."""


class GraphentError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(GraphentError, ValueError):
    """Invalid experiment configuration or malformed spec string."""


class LimitExceededError(GraphentError):
    """A size cap (dense state, probability table, eigensolve, term count) was exceeded."""


class ChannelCompatibilityError(GraphentError):
    """The channel cannot be handled by the requested method."""
