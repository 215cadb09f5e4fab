"""Exception hierarchy shared by all modules.

Existence failures carry the violated clause and the numerical margin that
decided the rejection, so callers (and the CLI) can report why a construction
was refused instead of a bare "no".
"""

from __future__ import annotations


class GenInvError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GenInvError):
    """Malformed or inconsistent input (bad shapes, non-finite entries, ...)."""


class KernelError(GenInvError):
    """A dense factorization failed to converge."""


class ExistenceError(GenInvError):
    """The requested inverse does not exist at the working tolerances."""

    def __init__(self, message: str, *, clause: str, margin: float | None = None):
        super().__init__(message)
        self.clause = clause
        self.margin = margin


class CertificateError(ExistenceError):
    """A constructed inverse failed its own residual acceptance check."""

    def __init__(self, message: str, *, margin: float | None = None):
        super().__init__(message, clause="residual exceeds tolerance", margin=margin)
