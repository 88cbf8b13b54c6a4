"""Shared exception types."""


class ConfigError(ValueError):
    """A parameter or configuration value violates a documented precondition."""


class DivergenceError(RuntimeError):
    """An iterate became non-finite; carries the offending iteration index."""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration
