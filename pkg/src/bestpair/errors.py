"""Exception hierarchy shared by the library and the command line."""


class BestPairError(Exception):
    """Base class for all errors raised by bestpair."""

    exit_code = 2


class InputError(BestPairError, ValueError):
    """Malformed input: wrong dimensions, bad config fields, empty lists."""

    exit_code = 1


class InvalidConstraintError(InputError):
    """A non-trivial half-space with an all-zero normal."""


class UnsupportedPlotError(InputError):
    """Plotting was requested for a trace that is not two-dimensional."""


class CapacityError(BestPairError):
    """A brute-force routine was asked to handle more than it is built for."""


class StateError(BestPairError):
    """An operation was called on an object that cannot support it yet."""
