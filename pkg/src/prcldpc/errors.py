"""Exception types raised across the package."""


class PrcLdpcError(Exception):
    """Base class for all library errors."""


class ZeroModulus(PrcLdpcError, ZeroDivisionError):
    pass


class MissingFactorization(PrcLdpcError, KeyError):
    pass


class InvalidPolynomial(PrcLdpcError, ValueError):
    pass


class ParseError(PrcLdpcError, ValueError):
    """Malformed text input; carries 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if column is not None:
            parts.append(f"column {column}")
        super().__init__(", ".join(parts) + ": " + message if parts else message)


class RccViolation(PrcLdpcError, ValueError):
    pass


class LengthOutOfRange(PrcLdpcError, ValueError):
    pass


class RateOverflow(PrcLdpcError, ValueError):
    pass


class ShortenTooDeep(PrcLdpcError, ValueError):
    pass


class LengthMismatch(PrcLdpcError, ValueError):
    pass


class TooLarge(PrcLdpcError, ValueError):
    pass


class NotPrimitive(PrcLdpcError, ValueError):
    pass


class NotFound(PrcLdpcError, LookupError):
    pass


class MarkMissing(PrcLdpcError, ValueError):
    pass


class EmptySearchSpace(PrcLdpcError, ValueError):
    pass


class InvalidPlan(PrcLdpcError, ValueError):
    pass


class NoOverlap(PrcLdpcError, ValueError):
    pass
