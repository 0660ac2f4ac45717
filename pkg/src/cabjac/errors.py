"""Error taxonomy shared across the package.

Each class maps to one CLI exit code; library callers catch them directly.
"""


class CabjacError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class UsageError(CabjacError):
    """Bad arguments or misuse of an interface."""

    exit_code = 2


class ValidationError(CabjacError):
    """Curve rejected at validation time (singular, inseparable, ...)."""

    exit_code = 3

    def __init__(self, reason, message):
        super().__init__(message)
        self.reason = reason


class RankFailureError(CabjacError):
    """Relation matrix rank is below the factor base size."""

    exit_code = 4


class OrderFailureError(CabjacError):
    """Product of invariant factors violates the class number interval."""

    exit_code = 5


class BudgetError(CabjacError):
    """A randomized search ran out of trials or candidates."""

    exit_code = 6

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}


class IntegrityError(CabjacError):
    """An internal consistency check failed; never ignored."""

    exit_code = 7


class ResourceError(CabjacError):
    """A configured ceiling (enumeration size, table size) was exceeded."""

    exit_code = 3


class PlannerError(CabjacError):
    """Parameter planning detected an unsatisfiable search space."""

    exit_code = 2


class RamifiedPlaceError(CabjacError):
    """Root lifting hit a ramified place; the candidate must be discarded."""

    exit_code = 7
