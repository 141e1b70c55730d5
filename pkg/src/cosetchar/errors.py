"""Exception types raised across the package."""


class CosetCharError(Exception):
    """Base class for all errors raised by cosetchar."""


class InvalidFamilyRank(CosetCharError, ValueError):
    pass


class RankMismatch(CosetCharError, ValueError):
    pass


class DimensionMismatch(CosetCharError, ValueError):
    pass


class NonIntegralWeight(CosetCharError, ValueError):
    pass


class NotDominant(CosetCharError, ValueError):
    pass


class NotLevelDominant(NotDominant):
    pass


class OrderUnderflow(CosetCharError, ValueError):
    """Offset alignment left no grade that is reliable in every operand."""


class OffsetMismatch(CosetCharError, ValueError):
    """Two series whose offsets differ by a non-integer were combined."""


class PoleLevel(CosetCharError, ValueError):
    pass


class CriticalLevel(PoleLevel):
    pass


class NotAdmissible(CosetCharError, ValueError):
    pass


class InvalidParams(CosetCharError, ValueError):
    pass


class UnsupportedParams(CosetCharError, ValueError):
    pass


class ZeroNorm(CosetCharError, ValueError):
    pass


class NegativeMultiplicity(CosetCharError, ArithmeticError):
    """Peeling produced a negative extremal coefficient."""


class UnboundedDenominator(CosetCharError, ArithmeticError):
    """Exponents attributed to one label do not lie on a single integer grid."""


class UnrecognizedExtremal(CosetCharError, ArithmeticError):
    pass


class BudgetExceeded(CosetCharError, ValueError):
    pass
