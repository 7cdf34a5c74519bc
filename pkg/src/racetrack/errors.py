"""Exception types shared across the package.

Each maps to a distinct CLI exit code (see ``racetrack.cli``).
"""


class InvalidInputError(ValueError):
    """Malformed or inconsistent input (dimension mismatch, bad literal)."""


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


class InfeasibleError(ValueError):
    """No trajectory exists with the requested properties."""


class ConfigurationError(ValueError):
    """A policy or option is missing a required input."""


class ResourceError(RuntimeError):
    """A search exceeded its state or memory budget."""


class UnsupportedError(ValueError):
    """Operation not supported for this input (e.g. plotting d != 2)."""
