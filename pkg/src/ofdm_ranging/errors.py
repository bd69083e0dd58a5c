"""Exception types shared across the package."""


class DimensionError(ValueError):
    """An input has an invalid or inconsistent dimension."""


class ContractViolation(ValueError):
    """An input violates a documented precondition (e.g. non-Hermitian matrix)."""


class InternalConsistencyError(RuntimeError):
    """Two construction paths that must agree disagreed beyond tolerance."""


class ConfigError(ValueError):
    """A configuration file is unreadable or contains an invalid entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"config key '{key}': {message}")
