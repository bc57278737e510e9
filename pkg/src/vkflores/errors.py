"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: usage problems exit with 2,
integrity and resource problems with 3.
"""


class VKFError(Exception):
    """Base class for errors raised by this package."""


class UsageError(VKFError, ValueError):
    """Bad arguments: out-of-range indices, shape mismatches, unknown names."""


class IntegrityError(VKFError, RuntimeError):
    """A structural invariant failed (e.g. a boundary does not square to zero)."""


class ResourceError(VKFError, MemoryError):
    """A computation would exceed the configured memory budget."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class DomainError(VKFError, ValueError):
    """A function was evaluated outside its domain (e.g. on the diagonal)."""
