"""Exception types shared across the package."""


class GoalreachError(Exception):
    """Base class for all package-specific errors."""


class DegenerateAnnuityError(GoalreachError):
    """Annuity over an empty payment period (m = 0)."""


class InfeasibleScenarioError(GoalreachError):
    """Scenario parameters violate a feasibility restriction.

    Carries the name of the violated condition so callers (and the CLI,
    which maps this to exit code 3) can report exactly what failed.
    """

    def __init__(self, condition, message=""):
        self.condition = condition
        super().__init__(message or condition)


class BracketError(GoalreachError):
    """Root bracket does not contain a sign change."""


class ConvergenceError(GoalreachError):
    """Iteration cap reached before the requested tolerance."""


class SchemaError(GoalreachError):
    """Scenario file fails validation (CLI exit code 2)."""
