"""Exception hierarchy.

Every domain error carries a short machine-readable ``reason`` token that the
CLI prints verbatim, so scripts can branch on it without parsing messages.
"""

from __future__ import annotations


class SieveError(Exception):
    """Base class for all domain errors (CLI exit status 1)."""

    reason = "SieveError"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.reason)
        self.details = details

    def token(self) -> str:
        return self.reason


class ArityMismatch(SieveError):
    reason = "ArityMismatch"


class InvalidModulus(SieveError):
    reason = "InvalidModulus"


class NonCoprimeModuli(SieveError):
    reason = "NonCoprimeModuli"


class BoundExceeded(SieveError):
    reason = "BoundExceeded"


class FullClass(SieveError):
    reason = "FullClass"


class CoprimalityViolation(SieveError):
    reason = "CoprimalityViolation"

    def __init__(self, i: int, j: int, message: str = ""):
        super().__init__(message or f"classes {i} and {j} have non-coprime moduli", i=i, j=j)
        self.pair = (i, j)


class StreamExhausted(SieveError):
    reason = "StreamExhausted"


class WindowTooLarge(SieveError):
    reason = "WindowTooLarge"


class NotAdmissibleError(SieveError):
    reason = "NotAdmissible"


class NoCommonBasis(SieveError):
    reason = "NoCommonBasisUpTo"

    def __init__(self, L: int, message: str = ""):
        super().__init__(message or f"no common basis up to L={L}", L=L)
        self.L = L

    def token(self) -> str:
        return f"NoCommonBasisUpTo({self.L})"


class NotWellDefined(SieveError):
    reason = "NotWellDefined"


class PolynomialError(SieveError):
    reason = "PolynomialError"


class CertificateError(SieveError):
    reason = "InvalidCertificate"


class DslError(Exception):
    """Parse-time failure with line/column attribution (CLI exit status 2)."""

    def __init__(self, reason: str, message: str, line: int = 0, col: int = 0):
        self.reason = reason
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {reason}: {message}")

    def token(self) -> str:
        return self.reason
