"""Exception hierarchy shared by all subpackages."""


class MmleError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(MmleError):
    """Invalid dimensions, parameters, or run configuration."""


class UnsupportedOracleError(MmleError):
    """An analytic oracle was requested from a model that lacks one."""


class DivergenceError(MmleError):
    """A trajectory left the finite floats; carries the offending step index."""

    def __init__(self, message, step):
        super().__init__(message)
        self.step = step


class InstabilityError(MmleError):
    """The linear drift matrix is not Hurwitz; no stationary covariance."""
