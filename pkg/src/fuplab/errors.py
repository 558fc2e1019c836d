"""Exception hierarchy shared by all fuplab modules.

The CLI maps these onto process exit codes: input errors exit 2,
numerical non-convergence exits 3, budget overruns exit 4.
"""

from __future__ import annotations


class FuplabError(Exception):
    """Base class for all fuplab errors."""

    exit_code = 1


class InputError(FuplabError):
    """A precondition on user-supplied data was violated."""

    exit_code = 2


class ConvergenceError(FuplabError):
    """An iterative solver hit its cap without meeting tolerance.

    Carries the last iterate so callers can inspect partial progress
    instead of receiving a silently wrong answer.
    """

    exit_code = 3

    def __init__(self, message, last_value=None, iterations=None, residual=None):
        super().__init__(message)
        self.last_value = last_value
        self.iterations = iterations
        self.residual = residual


class BudgetError(FuplabError):
    """The requested computation exceeds the configured resource budget."""

    exit_code = 4
