"""Exception hierarchy.

Precondition and parse failures derive from :class:`PreconditionError`
(CLI exit code 2); numeric failures derive from :class:`NumericError`
(CLI exit code 3).
"""


class ResformError(Exception):
    pass


class PreconditionError(ResformError, ValueError):
    pass


class NumericError(ResformError, ArithmeticError):
    pass


class ParseError(PreconditionError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnboundNameError(ParseError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("unbound identifier(s): " + ", ".join(self.names))


class ExponentOverflowError(PreconditionError, OverflowError):
    pass


class ChartDegenerateError(PreconditionError):
    pass


class NotQuasihomogeneousError(PreconditionError):
    pass


class NoPrimitiveError(PreconditionError):
    pass


class NotSecondResidueError(PreconditionError):
    pass


class PoleProximityError(NumericError):
    pass


class SingularPointError(NumericError):
    pass


class OffHypersurfaceError(PreconditionError):
    pass


class ConvergenceError(NumericError):
    pass


class SamplingError(NumericError):
    pass


class QuadratureError(NumericError):
    pass
