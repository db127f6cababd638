"""Exception types shared across the package."""


class EvckitError(Exception):
    """Base class for all package-specific errors."""


class GraphFormatError(EvckitError, ValueError):
    """Input text or file cannot be parsed as a graph."""


class ValidationError(EvckitError, ValueError):
    """Structurally invalid data: self-loops, duplicate edges, unknown labels."""


class PreconditionError(EvckitError, ValueError):
    """A documented operation precondition was violated by the caller."""


class IntegrityError(EvckitError, RuntimeError):
    """An internal cross-check failed; indicates a bug or a violated contract."""


class ResourceLimitError(EvckitError, RuntimeError):
    """Analysis would exceed its configured budget.

    ``bracket`` carries the best known (low, high) bounds when a value was
    partially computed before the refusal.
    """

    def __init__(self, message: str, *, bracket: tuple[int, int] | None = None):
        super().__init__(message)
        self.bracket = bracket
