"""Shared exception types."""


class BVError(Exception):
    """Base class for all package errors."""


class ContractViolation(BVError):
    """An operation was called outside its contract (mismatched contexts,
    parity-violating substitution, degree mismatch, ...)."""


class ParseError(BVError):
    """Malformed input text. Carries line/column information when available."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc = f" ({loc})"
        super().__init__(message + loc)


class NumericError(BVError):
    """Numeric evaluation produced a non-finite value."""
