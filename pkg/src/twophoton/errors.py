"""Exception hierarchy shared by every stage of the simulator."""


class TwoPhotonError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(TwoPhotonError, ValueError):
    """A grid, pulse, filter or scan parameter violates a precondition."""


class UsageError(TwoPhotonError, ValueError):
    """An operation was called on data in the wrong representation."""


class DomainError(TwoPhotonError, ValueError):
    """A scalar argument lies outside the domain of a formula."""


class MeasurementError(TwoPhotonError, RuntimeError):
    """A quantity could not be extracted from the data (fit failure, truncated peak)."""
