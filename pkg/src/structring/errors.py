"""Exception hierarchy shared by every module of the package."""


class StructRingError(Exception):
    """Base class for all library errors."""


class NotAPreorder(StructRingError, ValueError):
    """A relation used as a structural pattern is not reflexive and transitive."""


class SizeMismatch(StructRingError, ValueError):
    pass


class DescriptorMismatch(StructRingError, TypeError):
    """Operands live in different rings."""


class UnsupportedRing(StructRingError):
    pass


class NoncommutativeRing(StructRingError):
    """The operation is only defined over commutative rings."""


class NotAUnit(StructRingError, ArithmeticError):
    pass


class NotStructural(StructRingError, ValueError):
    """A matrix claims a pattern it does not respect."""


class PreadjointTooLarge(StructRingError, ValueError):
    pass


class NotInvertible(StructRingError, ArithmeticError):
    pass


class OneSidedInverse(NotInvertible):
    """x * y == 1 holds but y * x != 1.

    The right inverse that was found is kept on ``right_inverse``.
    """

    def __init__(self, message, right_inverse=None):
        super().__init__(message)
        self.right_inverse = right_inverse


class NoMethodApplicable(StructRingError):
    pass


class NotAnnihilating(StructRingError, ValueError):
    pass


class ConstantTermNotUnit(StructRingError, ValueError):
    pass


class NotNilpotent(StructRingError, ValueError):
    pass


class InfiniteRing(StructRingError):
    pass


class PowerLimitExceeded(StructRingError):
    """Power iteration did not close its cycle within the step budget."""


class GenerationFailed(StructRingError):
    pass


class UnsupportedCombination(StructRingError, ValueError):
    pass
