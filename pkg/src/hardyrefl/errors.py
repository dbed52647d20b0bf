"""Exception hierarchy.

Input errors (bad arguments) and numerical failures (a computation that could
not reach its accuracy target) are kept apart so the CLI can map them to
different exit codes.
"""


class HardyReflError(Exception):
    """Base class for every error raised by this package."""


class InputError(HardyReflError, ValueError):
    """The arguments violate a documented precondition."""


class NumericalFailure(HardyReflError, ArithmeticError):
    """A numerical routine could not certify its result."""


class IdentityCheckFailure(HardyReflError, AssertionError):
    """An asserted identity or theorem statement did not hold numerically."""


# input errors
class InvalidDiskPoint(InputError):
    pass


class PoleAtPoint(InputError):
    pass


class ZeroBase(InputError):
    pass


class ZeroPoint(InputError):
    pass


class KernelAtA(InputError):
    pass


class OrderMismatch(InputError):
    pass


class InvalidOrder(InputError):
    pass


class NotHermitian(InputError):
    pass


class IndefiniteInput(InputError):
    pass


class GenericPositionViolated(InputError):
    pass


# numerical failures
class SingularInput(NumericalFailure):
    pass


class QuadratureFailure(NumericalFailure):
    pass


class RankLoss(NumericalFailure):
    pass


class IntersectionMismatch(IdentityCheckFailure):
    """Raised by the intersection suite when a pair has the wrong dimension."""
