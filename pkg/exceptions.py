"""
Error hierarchy with machine-readable codes
"""
from typing import Optional


class SrdefError(Exception):
    """Base class for all library errors"""

    code = "error"
    exit_status = 1

    def to_dict(self):
        return {"code": self.code, "message": str(self)}


class CapacityError(SrdefError):
    """Vertex index or count beyond the configured capacity"""
    code = "capacity"


class DomainError(SrdefError):
    """Input outside the mathematical domain of an operation"""
    code = "domain"


class UsageError(SrdefError):
    """Bad identifier, flag or parameter"""
    code = "usage"


class ParseError(UsageError):
    """Malformed facet file or degree string"""
    code = "parse"

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number

    def to_dict(self):
        data = super().to_dict()
        data["line"] = self.line_number
        return data


class ResourceError(SrdefError):
    """Configured computation budget exceeded"""
    code = "resource"


class UnsupportedError(SrdefError):
    """Valid request the library deliberately does not handle"""
    code = "unsupported"


class VerificationFailure(SrdefError):
    """A verification ran and produced a nonzero residual"""
    code = "verification"
    exit_status = 2
