"""Exception hierarchy shared by every qmeter module."""


class QMeterError(Exception):
    """Base class for all qmeter errors."""


class InvalidDimension(QMeterError, ValueError):
    pass


class DimensionError(QMeterError, ValueError):
    """Operand dimensions do not agree."""


class ShapeError(QMeterError, ValueError):
    """An operation requiring a square (n == m) layout got a rectangular one."""


class InvalidOperator(QMeterError, ValueError):
    pass


class InvalidState(QMeterError, ValueError):
    pass


class InvalidDevice(QMeterError, ValueError):
    pass


class NotAnIsometry(InvalidDevice):
    """The response tensor does not map orthonormal inputs to orthonormal outputs."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class InvalidArgument(QMeterError, ValueError):
    pass


class DomainError(QMeterError, ValueError):
    pass


class NumericalInconsistency(QMeterError, ArithmeticError):
    """Two algebraically equal routes to a quantity disagree beyond tolerance."""


class ParseError(QMeterError, ValueError):
    """Malformed device or scenario text. Carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
