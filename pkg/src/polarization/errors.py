"""Exception hierarchy shared by every module of the package."""


class PolarizationError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatch(PolarizationError, TypeError):
    """Operands live in different fields."""


class InexactScalar(PolarizationError, TypeError):
    """A float reached an exact code path."""


class CharacteristicDividesFactorial(PolarizationError, ArithmeticError):
    """n! is not invertible because 0 < char(K) <= n."""

    def __init__(self, n, characteristic):
        super().__init__(
            f"{n}! is not invertible in a field of characteristic {characteristic}"
        )
        self.n = n
        self.characteristic = characteristic


class CharacteristicTwo(PolarizationError, ArithmeticError):
    """The signed (+/-1) identity needs 2 to be invertible."""


class DimensionMismatch(PolarizationError, ValueError):
    pass


class ArityMismatch(PolarizationError, ValueError):
    pass


class NotHomogeneous(PolarizationError, ValueError):
    pass


class OddOrder(PolarizationError, ValueError):
    pass


class IndexOutOfRange(PolarizationError, IndexError):
    pass


class NotPositiveSemidefinite(PolarizationError, ValueError):
    pass
