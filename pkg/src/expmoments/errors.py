"""Shared exception types."""


class DomainError(ValueError):
    """An input violates a mathematical precondition (bad frequencies,
    point outside the admissible region, mismatched measure support, ...)."""


class UnsolvableError(ValueError):
    """A moment-problem pipeline stage rejected its input.

    ``stage`` names the stage that failed: "solvability", "jacobi",
    "domain" or "residual".
    """

    def __init__(self, stage: str, reason: str):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason


class ConvergenceError(RuntimeError):
    """An iterative numerical routine did not reach its target accuracy.

    ``achieved`` carries the best available estimate, when there is one.
    """

    def __init__(self, message: str, achieved=None):
        super().__init__(message)
        self.achieved = achieved
