"""Exception hierarchy shared by the solvers and the command line."""


class TPackError(Exception):
    """Base class for all library errors."""


class DomainError(TPackError, ValueError):
    """Bad argument: unknown vertex, overlapping sets, malformed input."""


class InfeasibleError(TPackError):
    """More disjoint paths were requested than the minimum cut allows."""

    def __init__(self, message, cut=None, value=None):
        super().__init__(message)
        self.cut = cut
        self.value = value


class PreconditionError(TPackError):
    """A mathematical premise does not hold; ``witness`` locates the failure."""

    def __init__(self, message, witness=None, kind="precondition"):
        super().__init__(message)
        self.witness = witness
        self.kind = kind


class RefusalError(TPackError):
    """An exhaustive routine refused an instance above its size guard."""


class UnstabilizedError(TPackError):
    """A windowed quantity did not stabilize within the radius budget."""

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = list(values or [])


class ConsistencyError(TPackError):
    """An internal certificate check failed. Never silently recovered."""


class PresentationError(DomainError):
    """An infinite-graph presentation violates its declared invariants."""


class BudgetError(TPackError):
    """The backtracking search exhausted its node budget."""
