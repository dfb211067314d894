"""Exception hierarchy shared by every module of the package."""


class ImmanantLabError(Exception):
    """Base class for all errors raised by immanant_lab."""


class ApplicabilityError(ImmanantLabError, ValueError):
    """An operation was applied to inputs of the wrong shape or size."""


class NotSquareError(ApplicabilityError):
    pass


class DimensionMismatchError(ApplicabilityError):
    pass


class DegreeMismatchError(ApplicabilityError):
    pass


class IndexOutOfRangeError(ApplicabilityError):
    pass


class TooLargeError(ApplicabilityError):
    pass


class GroupTooLargeError(TooLargeError):
    pass


class NotSamePartitionSizeError(ApplicabilityError):
    pass


class NotHermitianError(ApplicabilityError):
    pass


class NotPsdInputError(ApplicabilityError):
    pass


class ZeroVectorError(ApplicabilityError):
    pass


class NotUnitError(ApplicabilityError):
    pass


class NonFiniteError(ApplicabilityError):
    pass


class NoConvergenceError(ImmanantLabError, ArithmeticError):
    pass


class NotIdempotentError(ImmanantLabError, ArithmeticError):
    pass


class SubspaceNotInvariantError(ImmanantLabError, ArithmeticError):
    pass


class DegenerateSymmetrizedTensorError(ImmanantLabError, ArithmeticError):
    pass


class InvalidGroupError(ImmanantLabError, ValueError):
    pass
