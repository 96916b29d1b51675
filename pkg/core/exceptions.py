# core/exceptions.py


class KglError(Exception):
    """Base class for every error raised by the kglscope apps."""


class ExpressionSyntaxError(KglError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DivisionByZero(KglError, ZeroDivisionError):
    pass


class NegativeValuation(KglError):
    pass


class SizeMismatch(KglError):
    pass


class Singular(KglError):
    pass


class IntegralityViolation(KglError):
    pass


class SectionMismatch(KglError):
    pass


class NotAUnit(KglError):
    pass


class UnsupportedDegenerate(KglError):
    pass


class ZeroPivot(KglError):
    def __init__(self, k):
        super().__init__(f"pivot {k} vanishes")
        self.k = k


class NotAdmissible(KglError):
    pass


class InvalidStratumData(KglError):
    pass


class Inconsistent(KglError):
    pass


class TypeMismatch(KglError):
    pass


class NotASubbundle(KglError):
    pass
