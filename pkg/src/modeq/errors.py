"""Exception hierarchy shared by every module."""


class ModeqError(Exception):
    """Base class for library errors."""


class DivisionByZeroSeries(ModeqError, ZeroDivisionError):
    pass


class NonMonicBase(ModeqError):
    pass


class ZeroSeries(ModeqError):
    pass


class UnknownGenerator(ModeqError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnsupportedSpace(ModeqError):
    pass


class NotInSpace(ModeqError):
    pass


class InsufficientPrecision(ModeqError):
    pass


class NotQuasimodular(ModeqError):
    pass


class NonUniqueExtremal(ModeqError):
    pass


class NoExtremal(ModeqError):
    pass


class ExponentMismatch(ModeqError):
    pass


class ConditionHViolated(ModeqError):
    pass


class CertificationFailed(ModeqError):
    pass


class WronskianNotSquareCompatible(ModeqError):
    pass


class InhomogeneousInput(ModeqError):
    pass


class NotSimpleZero(ModeqError):
    pass


class IndicialMismatch(ModeqError):
    pass


class DegenerateParameter(ModeqError):
    pass


class UnsupportedArity(ModeqError):
    pass


class GeneratorMismatch(ModeqError):
    pass
