"""Exception types shared across the package."""


class CyclohermError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CyclohermError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ContextMismatchError(CyclohermError, ValueError):
    """Operands belong to different rings."""


class DivisibilityError(CyclohermError, ArithmeticError):
    """Exact division failed; doubles as an ideal-membership test failure."""


class NotRealError(CyclohermError, ValueError):
    """Coercion to the real subring was requested for a non-real element."""


class BudgetError(CyclohermError, RuntimeError):
    """An enumeration or sampling run exceeded its configured budget."""


class TheoremViolationError(CyclohermError, AssertionError):
    """A statement the library treats as proved failed on concrete data.

    Carries a ``witness`` payload so the offending object can be reported.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalInvariantError(CyclohermError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""
