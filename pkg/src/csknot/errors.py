"""Exception hierarchy shared by all csknot modules."""


class CsknotError(Exception):
    """Base class for every error raised by this package."""


class NonSquareError(CsknotError, ValueError):
    pass


class KOutOfRangeError(CsknotError, ValueError):
    pass


class DependentRowsError(CsknotError, ValueError):
    pass


class NonMonicError(CsknotError, ValueError):
    pass


class NonMonicDivisorError(NonMonicError):
    pass


class NonUnitConstantTermError(CsknotError, ValueError):
    pass


class ZeroConstantTermError(CsknotError, ValueError):
    pass


class DegreeTooSmallError(CsknotError, ValueError):
    pass


class NotPrimeError(CsknotError, ValueError):
    pass


class NotSquarefreeError(CsknotError, ValueError):
    pass


class UnknownFamilyError(CsknotError, ValueError):
    pass


class OrderMismatchError(CsknotError, ValueError):
    pass


class AllZeroGeneratorsError(CsknotError, ValueError):
    pass


class NotAFactorError(CsknotError, ValueError):
    pass


class HypothesesNotMetError(CsknotError, ValueError):
    pass


class InapplicableError(CsknotError, ValueError):
    pass


class BoundTooLargeError(CsknotError, ValueError):
    pass


class CharpolyMismatchError(CsknotError, ValueError):
    pass


class NonInvertibleError(CsknotError, ValueError):
    pass


class NotCsPolynomialError(CsknotError, ValueError):
    pass


class ParseError(CsknotError, ValueError):
    pass
