"""Exception types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """Invalid user-supplied input: graphs, files, parameters."""


class DimacsParseError(InputError):
    """Malformed DIMACS text; carries the offending line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class SolverFailure(RuntimeError):
    """Relaxation budget exhausted before the iterate reached a binary state.

    Carries the last iterate and penalty level so callers can inspect or
    fall back to another solver.
    """

    def __init__(self, message: str, last_iterate=None, penalty: float | None = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.penalty = penalty


class BudgetExceeded(RuntimeError):
    """Exact search ran out of its node-expansion budget."""


class RegistrationError(RuntimeError):
    """Registration pipeline could not produce a rigid transform."""
