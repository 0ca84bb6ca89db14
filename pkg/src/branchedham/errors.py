"""Exception hierarchy shared by the core modules, the service and the CLI."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""

    exit_code = 3


class NumericalError(RuntimeError):
    """A computation started but could not be completed reliably."""

    exit_code = 4
