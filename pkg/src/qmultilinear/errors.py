"""Exception hierarchy shared by all modules."""


class QMError(Exception):
    """Base class for all errors raised by qmultilinear."""


class NotPrime(QMError, ValueError):
    pass


class DegreeTooLarge(QMError, ValueError):
    pass


class FieldMismatch(QMError, ValueError):
    pass


class DivideByZero(QMError, ZeroDivisionError):
    pass


class NotASubfield(QMError, ValueError):
    pass


class NotABasis(QMError, ValueError):
    pass


class BudgetExceeded(QMError, RuntimeError):
    pass


class AmbientMismatch(QMError, ValueError):
    pass


class ShapeMismatch(QMError, ValueError):
    pass


class EmptyCode(QMError, ValueError):
    pass


class BadIndexSet(QMError, ValueError):
    pass


class NotInvertible(QMError, ValueError):
    pass


class IdealizerTooLarge(QMError, RuntimeError):
    pass


class NotAMatroid(QMError, ValueError):
    pass


class BadRank(QMError, ValueError):
    pass


class BadFamily(QMError, ValueError):
    pass


class BadLoopDim(QMError, ValueError):
    pass


class GroundMismatch(QMError, ValueError):
    pass


class BadParams(QMError, ValueError):
    pass


class UnsupportedQ(QMError, ValueError):
    pass


class BadM(QMError, ValueError):
    pass


class NotDisjoint(QMError, ValueError):
    pass


class FormatError(QMError, ValueError):
    """Malformed code, tensor or subspace text."""


class UsageError(QMError):
    pass
