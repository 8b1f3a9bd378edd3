"""Error types raised by the algebra modules, each mapped to a command exit code."""
from typing import Any, Optional


class GroupCertError(Exception):
    exit_code = 1


class ParameterError(GroupCertError, ValueError):
    """Invalid parameters, malformed input text or mismatched operands."""
    exit_code = 2


class ResourceCapError(GroupCertError, RuntimeError):
    exit_code = 3

    def __init__(self, message: str, partial: Optional[int] = None, cap: Optional[int] = None):
        super().__init__(message)
        self.partial = partial
        self.cap = cap


class VerificationFailed(GroupCertError, AssertionError):
    """A certificate or identity check found a counterexample."""

    def __init__(self, check: str, message: str, witness: Any = None):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.witness = witness


class NoSuchVectorError(GroupCertError, ValueError):
    pass


class UniquenessError(GroupCertError, RuntimeError):
    pass


class NotApplicable(GroupCertError):
    """The hypothesis of a check does not hold for the given input; nothing was verified."""
    exit_code = 0
