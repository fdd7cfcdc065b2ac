"""Exception and warning types shared across the package."""


class CrossKerrError(Exception):
    """Base class for all package errors."""


class DomainError(CrossKerrError, ValueError):
    """An argument is outside the physically or numerically valid domain."""


class ConfigError(CrossKerrError):
    """A run-configuration file is malformed or violates the schema."""


class IntegrationError(CrossKerrError):
    """Adaptive integration failed; carries the last good state reached.

    Attributes
    ----------
    last_time : float
        Time of the last accepted step, seconds.
    last_state : object
        SemiclassicalState at the last accepted step, or None.
    """

    def __init__(self, message, last_time=None, last_state=None):
        super().__init__(message)
        self.last_time = last_time
        self.last_state = last_state


class RegimeWarning(UserWarning):
    """An operating-regime assumption of the readout scheme is violated."""
