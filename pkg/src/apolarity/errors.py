from __future__ import annotations


class ApolarityError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 2


class PreconditionError(ApolarityError):
    exit_code = 2


class MismatchError(PreconditionError):
    """Operands live in different rings (variable count or field)."""


class ZeroPolynomialError(PreconditionError):
    pass


class UnsupportedCharacteristicError(PreconditionError):
    pass


class InvalidAutomorphismError(PreconditionError):
    pass


class NotHomogeneousError(PreconditionError):
    pass


class DegenerateRayError(PreconditionError):
    pass


class HypothesisError(PreconditionError):
    pass


class PivotError(PreconditionError):
    pass


class ShapeMismatchError(PreconditionError):
    pass


class PrecisionError(ApolarityError):
    """The truncation bound was too small to certify the answer."""

    exit_code = 3


class ParseError(ApolarityError):
    exit_code = 1

    def __init__(self, message: str, line: int = 1, column: int = 1, hint: str | None = None):
        self.line = line
        self.column = column
        self.hint = hint
        text = f"line {line}, column {column}: {message}"
        if hint:
            text += f" ({hint})"
        super().__init__(text)
