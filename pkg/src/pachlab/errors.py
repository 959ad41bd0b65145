"""Shared exception types."""


class PachlabError(Exception):
    """Base class for all package-specific errors."""


class InvalidFaceError(PachlabError, ValueError):
    """A face violates the one-vertex-per-part structure or is out of range."""


class DegeneracyError(PachlabError):
    """A geometric predicate hit a configuration it refuses to classify.

    Raised instead of perturbing: callers are expected to re-randomize
    their query data and retry.
    """


class NotACoboundaryError(PachlabError, ValueError):
    """The target cochain is not in the image of the coboundary map."""


class BudgetExceededError(PachlabError):
    """An exhaustive search or enumeration would exceed its configured budget."""

    def __init__(self, message, required=None, budget=None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class SizeLimitError(PachlabError):
    """Input is larger than the configured size limit for an exact routine."""


class MapValidationError(PachlabError):
    """A PL map failed structural or genericity validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:8])
        more = "" if len(self.violations) <= 8 else f" (+{len(self.violations) - 8} more)"
        super().__init__(f"{len(self.violations)} validation violation(s): {lines}{more}")


class SearchFailedError(PachlabError):
    """A randomized search exhausted its retry budget without success."""


class PipelineError(PachlabError):
    """A pipeline stage failed; carries the stage name."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
