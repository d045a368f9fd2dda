"""Exception hierarchy shared by the series core, the engine and the DSL."""


class QSeriesError(Exception):
    """Base class for every error raised by this package."""

    kind = "QSeriesError"


class NotInvertible(QSeriesError):
    kind = "NotInvertible"


class NonTerminating(QSeriesError):
    kind = "NonTerminating"


class OverflowUnsound(QSeriesError):
    """Setting a=1 would sum an a-expansion that was cut off at the a-order."""

    kind = "OverflowUnsound"


class BadParameters(QSeriesError):
    kind = "BadParameters"


class NonIntegerExponent(QSeriesError):
    kind = "NonIntegerExponent"


class Divergent(QSeriesError):
    kind = "Divergent"


class InsufficientTruncation(QSeriesError):
    kind = "InsufficientTruncation"


class IndexOutOfRange(QSeriesError):
    kind = "IndexOutOfRange"


class DSLSyntaxError(QSeriesError):
    kind = "SyntaxError"

    def __init__(self, message, line=0, column=0, expected=None):
        self.line = line
        self.column = column
        self.expected = expected
        loc = f"line {line}, column {column}: " if line else ""
        extra = f" (expected {expected})" if expected else ""
        super().__init__(f"{loc}{message}{extra}")


class UnboundVariable(QSeriesError):
    kind = "UnboundVariable"


class DuplicateName(QSeriesError):
    kind = "DuplicateName"
