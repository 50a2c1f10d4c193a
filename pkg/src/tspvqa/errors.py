"""Shared exception types."""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(RuntimeError):
    """The request exceeds a configured size guard (enumeration, qubits, memory)."""


class DegenerateInstanceError(ValueError):
    """All tours of the instance have equal length; ratio metrics are undefined."""


class ConfigError(ValueError):
    """A run configuration is internally inconsistent."""
