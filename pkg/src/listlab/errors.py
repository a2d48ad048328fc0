"""Exception types shared across the package."""


class ListLabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ListLabError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class ParseError(InputError):
    """A code/family file is malformed; the message names the offending line."""


class ParameterizationError(InputError):
    """Requested (n, L, R, eps) cannot satisfy the integer parameter constraints."""


class ResourceError(ListLabError, RuntimeError):
    """An enumeration would exceed a configured feasibility cap."""


class ConstructionFailure(ListLabError, RuntimeError):
    """A randomized construction did not produce a usable object at this size."""


class InternalCheckError(ListLabError, AssertionError):
    """A bound that is guaranteed by construction was violated: a logic bug."""
