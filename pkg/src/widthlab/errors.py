"""Exception types shared across widthlab modules."""


class WidthlabError(Exception):
    """Base class for all widthlab errors."""


class MetricError(WidthlabError):
    """Input is not a valid finite metric (shape, symmetry, or triangle failure)."""


class DisconnectedSpaceError(MetricError):
    """A weighted graph input has unreachable vertex pairs."""


class InfeasibleCoverError(WidthlabError):
    """No admissible cover exists, e.g. the radius cap is below the mesh floor."""


class SolverBudgetError(WidthlabError):
    """An exact solver was asked for more work than its configured budget."""


class HypothesisError(WidthlabError):
    """A required content hypothesis failed; carries the failing report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SeparatorError(WidthlabError):
    """A separating set could not be built or validated."""


class CertificateError(WidthlabError):
    """A width certificate failed verification; carries the verifier report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DrawingError(WidthlabError):
    """A planar drawing input is malformed."""
