"""Exception hierarchy shared by every module of the package."""


class TropicalError(Exception):
    """Base class for all errors raised by this package."""


class WindowExceeded(TropicalError):
    """A generator cannot materialize the requested window (e.g. overflow)."""


class BreakpointBudgetExceeded(TropicalError):
    """A breakpoint query would produce more events than the configured cap."""


class InvalidParameters(TropicalError, ValueError):
    pass


class InvalidSpec(TropicalError, ValueError):
    """Malformed function, polynomial, equation or periodic spec."""


class PreconditionViolated(TropicalError):
    """The hypotheses of a verifier are not met by the supplied instance."""


class NotASolution(TropicalError):
    """The function does not satisfy the equation a verifier requires."""
