class HypothesisError(ValueError):
    """Input does not satisfy the precondition of a correction procedure."""


class CorrectionError(RuntimeError):
    """A correction produced output that fails its own postconditions."""

    def __init__(self, message: str, clauses=None):
        super().__init__(message)
        self.clauses = clauses or []
