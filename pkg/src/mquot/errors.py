"""Exception hierarchy shared by all modules."""


class MquotError(Exception):
    """Base class for every error raised by the package."""


# mclass
class TagMismatch(MquotError):
    pass


class SymbolAlreadyDefined(MquotError):
    pass


class CircularDefinition(MquotError):
    pass


class NegativeExponent(MquotError):
    pass


class MissingSymbolImage(MquotError):
    pass


class UnknownSymbol(MquotError):
    pass


# gfq
class DivisionByZero(MquotError, ZeroDivisionError):
    pass


class LevelMismatch(MquotError):
    pass


class WildOrder(MquotError):
    pass


class NoSuchExtension(MquotError):
    pass


class FieldBoundExceeded(MquotError):
    pass


# action
class MalformedAction(MquotError):
    pass


class NormalizationFailed(MquotError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Inconsistent(MquotError):
    pass


# quotient
class ShapeViolation(MquotError):
    pass


class HypothesisViolation(MquotError):
    def __init__(self, message, failed_checks=()):
        super().__init__(message)
        self.failed_checks = tuple(failed_checks)


class UnquotientedBase(MquotError):
    pass


class MissingQuotientRule(MquotError):
    pass


class BudgetExceeded(MquotError):
    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


# nearby
class ModelInvalid(MquotError):
    pass


class TotalClassMismatch(MquotError):
    pass


# io
class ParseError(MquotError):
    pass
