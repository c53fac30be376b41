"""Exception hierarchy shared by every module."""


class DiagtorError(Exception):
    """Base class for all package errors."""


class UnsupportedRingError(DiagtorError):
    """An operation was asked to run over a ring it does not support."""


class DimensionError(DiagtorError, ValueError):
    """Operands have incompatible sizes (strand counts, matrix shapes)."""


class NotAComplexError(DiagtorError):
    """A composite of consecutive differentials is not zero."""


class NotAChainMapError(DiagtorError):
    """A square of a proposed chain map does not commute."""


class BudgetExceeded(DiagtorError):
    """A computation would exceed the configured size budget.

    ``required`` carries the size that was requested so callers can report it.
    """

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what}: requires {required}, budget is {budget}")


class NotAnnularError(DiagtorError):
    """Raised by callers that insist on an annular diagram."""


class PreconditionError(DiagtorError, ValueError):
    """Arguments violate a documented precondition."""


class ObstructionError(DiagtorError):
    """No idempotent generator exists by construction for this intersection."""


class CertificateError(DiagtorError):
    """A synthesized idempotent failed its own verification (a bug signal)."""


class CacheError(DiagtorError):
    """A cached table is unreadable or inconsistent."""
