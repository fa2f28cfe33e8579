"""Shared exception types for the solver library."""


class SolverError(Exception):
    """Base class for all library-specific errors."""


class BranchCutPoint(SolverError):
    """Raised when a point lies strictly inside the branch cut, where the
    single-valued square root is ambiguous."""


class InvalidTruncation(SolverError):
    """Raised when a requested contour truncation radius is smaller than the
    puncture radius R_Delta."""


class ExponentialOverflow(SolverError):
    """Raised when a transform exponent exceeds the overflow guard (|exponent|
    above 700 in natural-log units); indicates a misconfigured contour."""


class QuadratureDiverged(SolverError):
    """Raised when successive node-count refinements fail to converge below
    the requested tolerance."""


class GridTooCoarse(SolverError):
    """Raised when a grid is too small for the requested stencil."""


class MissingProxy(SolverError):
    """Raised when a lifespan-indicator constant has no supplied proxy value."""


class NoConvergence(SolverError):
    """Raised when Picard iteration exhausts max_iter without converging.

    Carries the partial report so callers can inspect the distance history.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StepDiverged(SolverError):
    """Raised when the finite-difference oracle's per-step fixed-point sweep
    fails to contract."""


class InhomogeneousBoundary(SolverError):
    """Raised when a dissipation audit is requested for a field whose boundary
    traces are not homogeneous."""


class ConfigInvalid(SolverError):
    """Raised when a scenario configuration fails validation."""
