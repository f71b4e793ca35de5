"""Exception hierarchy shared by the nmcd modules."""


class NMCDError(Exception):
    """Base class for all errors raised by nmcd."""


class InputError(NMCDError, ValueError):
    """Invalid input data or a violated precondition."""


class DomainError(NMCDError, ValueError):
    """An argument outside the mathematical domain of a function."""


class GridError(InputError):
    """Unsorted or out-of-range boundary grid, or an L the grid cannot hold."""


class InstanceTooLargeError(InputError):
    """Exhaustive enumeration requested on an instance that is too large."""
