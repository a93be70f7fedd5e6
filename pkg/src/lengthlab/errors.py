"""Exception hierarchy.

The CLI maps these onto exit statuses: :class:`UsageError` (and subclasses
other than :class:`ResourceError`) exit with 2, :class:`ResourceError` with 3.
"""


class LengthLabError(Exception):
    """Base class for every error raised by the package."""


class UsageError(LengthLabError):
    """Bad input: model mismatch, malformed spec, asymmetric weights, ..."""


class ValidationError(UsageError):
    pass


class DomainError(UsageError):
    """A parameter lies outside the domain of a family (e.g. eps >= 1)."""


class ModeError(UsageError):
    """An exact-only operation was handed approximate values."""


class StructureError(UsageError):
    """Disconnected quotient graph or development."""


class DegenerateError(UsageError):
    """A ball B_K that contains nothing but the identity."""


class PreconditionError(LengthLabError):
    """A checked precondition failed; carries a witness when one exists."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class A5ViolationError(PreconditionError):
    """No admissible x exists for some residual during decomposition."""


class InternalInvariantError(LengthLabError):
    pass


class ResourceError(LengthLabError):
    """A configured cap (ball size, vertex count) would be exceeded."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap
