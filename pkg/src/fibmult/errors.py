"""Exception types shared across the package."""


class FibMultError(Exception):
    """Base class for all errors raised by fibmult."""


class CodomainMismatch(FibMultError, ValueError):
    pass


class ReservedLabel(FibMultError, ValueError):
    pass


class InvalidInput(FibMultError, ValueError):
    pass


class NotAFibration(FibMultError):
    pass


class NoLift(FibMultError):
    pass


class AmbiguousLift(FibMultError):
    pass


class NotIso(FibMultError, ValueError):
    pass


class ShapeMismatch(FibMultError, ValueError):
    pass


class MissingProducts(FibMultError):
    pass


class MissingDiagonal(FibMultError):
    pass


class LawViolation(FibMultError):
    pass


class BoundTooSmall(FibMultError):
    pass


class NotExtensive(FibMultError):
    pass


class BadParams(FibMultError, ValueError):
    pass


class NotUnary(FibMultError):
    pass


class NoTriangle(FibMultError):
    pass


class Ambiguous(FibMultError):
    pass


class InvalidPresentation(FibMultError):
    pass


class NotASection(FibMultError):
    pass


class PresentationSyntaxError(FibMultError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = "" if line is None else f" (line {line}, column {column})"
        super().__init__(message + where)


class UndeclaredId(PresentationSyntaxError):
    pass


class UnknownCommand(FibMultError):
    pass


class BadFlags(FibMultError):
    pass
