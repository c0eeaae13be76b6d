"""Exception hierarchy shared by every module.

Each class carries the process exit code the CLI uses when it escapes.
"""


class LambdaQError(Exception):
    exit_code = 1


class ParseError(LambdaQError):
    """Malformed source text, with a 1-based line and column."""

    exit_code = 2

    def __init__(self, message, line=None, column=None, origin=None):
        self.line = line
        self.column = column
        self.origin = origin
        where = ""
        if line is not None:
            where = f"{origin or '<input>'}:{line}:{column}: "
        super().__init__(where + message)


class CalculusViolation(ParseError):
    """A construct that the selected calculus does not admit."""


class FuelExhausted(LambdaQError):
    exit_code = 3

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class StuckTerm(LambdaQError):
    exit_code = 4

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class Unobservable(LambdaQError):
    """Raised when cancellation leaves an empty collection."""

    exit_code = 5


class BudgetExceeded(LambdaQError):
    exit_code = 6


class HeadUnsigned(LambdaQError):
    pass


class NoRedex(LambdaQError):
    pass


class InternalLimit(LambdaQError):
    """A γ-normal form grew past the safety limit."""

    exit_code = 6


class InternalError(LambdaQError):
    pass


class NotANumeral(LambdaQError):
    pass


class NotAnInteger(NotANumeral):
    pass


class FormatError(ParseError):
    pass


class NotAConfiguration(LambdaQError):
    pass
