"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain.

    Distinct from a negative verdict: a verdict answers the question, this
    error says the question was not well posed.
    """


class NotAdmissibleError(ValueError):
    """A spectrum or profile is outside the class an operator is defined on
    (e.g. a negative subset sum under a fractional power)."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InternalInvariantError(AssertionError):
    """A mathematical law that must hold was observed to fail."""
