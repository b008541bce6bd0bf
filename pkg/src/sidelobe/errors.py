class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericPrecisionError(ArithmeticError):
    """Floating-point path could not reproduce an exact integer result."""


class ResourceGuardError(ValueError):
    """Requested size exceeds a hard enumeration cap."""


class PropertyFailure(AssertionError):
    """A checked mathematical property was violated.

    ``instance`` carries the violating input so reports can show it.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


class SequenceParseError(ValueError):
    def __init__(self, line, column, char):
        super().__init__(f"line {line}, column {column}: unexpected character {char!r}")
        self.line = line
        self.column = column
        self.char = char
