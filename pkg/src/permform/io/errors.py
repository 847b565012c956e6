from __future__ import annotations


class ParseError(ValueError):
    """Malformed instance text; ``line`` is 1-based when the fault has a location."""

    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class CertificateError(ValueError):
    pass


class DigestMismatch(CertificateError):
    pass
