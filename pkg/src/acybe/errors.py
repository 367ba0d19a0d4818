"""Exception types raised across the package."""


class AcybeError(Exception):
    pass


class DivisionByZero(AcybeError, ZeroDivisionError):
    pass


class IncompatibleCyclotomicOrders(AcybeError):
    pass


class DimensionMismatch(AcybeError, ValueError):
    pass


class InvalidMetric(AcybeError, ValueError):
    pass


class SingularGram(InvalidMetric):
    pass


class IncompatibleCoefficients(AcybeError, TypeError):
    pass


class NotAUnit(AcybeError, ValueError):
    pass


class NonvanishingConstantTerm(AcybeError, ValueError):
    pass


class NotDivisible(AcybeError, ValueError):
    def __init__(self, message, diagonal=None, degree=None):
        super().__init__(message)
        self.diagonal = diagonal
        self.degree = degree


class ParameterMismatch(AcybeError, ValueError):
    pass


class WindowTooSmall(AcybeError, ValueError):
    pass


class IndexOutOfRange(AcybeError, IndexError):
    pass


class DiagonalVanishes(AcybeError, ValueError):
    pass


class TruncationTooSmall(AcybeError, ValueError):
    pass


class NonPolynomialTail(AcybeError, ValueError):
    pass


class EigencomponentMismatch(AcybeError, ValueError):
    pass


class PoleDoesNotCancel(AcybeError, ValueError):
    pass


class CategoryMismatch(AcybeError, ValueError):
    pass


class NotComplementary(AcybeError, ValueError):
    pass


class InvalidPair(AcybeError, ValueError):
    pass


class NotInOrder(AcybeError, ValueError):
    pass


class ParseError(AcybeError, ValueError):
    pass
