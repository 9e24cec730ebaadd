"""Exception types raised across the package."""


class MonoholoError(Exception):
    """Base class for all package errors."""


class CoincidentEndpoints(MonoholoError):
    """Geodesic endpoints closer than the chordal tolerance."""


class OutOfRange(MonoholoError):
    """Parameter outside the truncated geodesic interval."""


class SolveFailed(MonoholoError):
    """A boundary-value or shooting solve did not converge."""


class StepTooLarge(MonoholoError):
    """Finite-difference result unstable under step refinement."""


class TruncationTooShort(MonoholoError):
    """Field not asymptotic at the truncation endpoints."""


class EigenGapTooSmall(MonoholoError):
    """Higgs eigenvalue gap too small to pick a decay direction."""


class MismatchedGeodesic(MonoholoError):
    """Paired solutions live on different geodesics or equal signs."""


class PhaseChainError(MonoholoError):
    """Consecutive boundary limit vectors fail to be parallel."""


class DegenerateProbe(MonoholoError):
    """No probe point gives a usable denominator."""


class NearSingular(MonoholoError):
    """Two-point value too close to its zero set for log derivatives."""


class RankDeficient(MonoholoError):
    """Design matrix of a polynomial fit is degenerate."""


class ShapeMismatch(MonoholoError):
    """Inconsistent matrix shapes in discrete Nahm data."""


class NonConvergence(MonoholoError):
    """Nonlinear least-squares solve stalled above tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateMap(MonoholoError):
    """Polynomial components share a factor; degree drops."""


class NotPositive(MonoholoError):
    """Coefficient matrix fails the positivity required of a valid fit."""


class BasePoint(MonoholoError):
    """Holomorphic sphere vanishes at the requested point."""


class DegenerateBasepoints(MonoholoError):
    """Four-point tensor not invertible for these basepoints."""


class DegenerateRoots(MonoholoError):
    """Orthogonality roots coincide; subalgebra is degenerate."""


class UsageError(MonoholoError):
    """Invalid command-line or configuration input."""
