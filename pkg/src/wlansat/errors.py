"""Exception types shared across the package."""


class WlansatError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(WlansatError, ValueError):
    """An input value violates a documented precondition.

    The message always names the offending field or argument.
    """


class StateSpaceTooLargeError(WlansatError, ValueError):
    """The WLAN count (or enumerated state count) exceeds a hard cap."""


class ContractViolationError(WlansatError, ValueError):
    """An internal API was called with arguments outside its contract."""


class NumericalError(WlansatError, RuntimeError):
    """A numerical routine failed to converge or produced non-finite values."""
