"""Exception hierarchy shared by all quantalab modules."""


class QuantalabError(Exception):
    """Base class for all library errors."""


class UsageError(QuantalabError):
    """An operation was called with incompatible arguments (mixed carriers,
    mismatched domains, elements outside the carrier)."""


class ConstructionError(QuantalabError):
    """A value failed its construction-time invariants (overlapping blocks,
    reversed endpoints, carrier not closed under the operation)."""


class StructuralError(QuantalabError):
    """A table is malformed (missing or extra entries).  Distinct from an
    axiom violation, which is reported, not raised."""


class BudgetError(QuantalabError):
    """A configured resource budget would be exceeded.

    Carries the offending count so callers can report it.
    """

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class PreconditionError(QuantalabError):
    """A mathematical precondition on the inputs does not hold."""
