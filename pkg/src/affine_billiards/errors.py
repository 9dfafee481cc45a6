"""Exception types shared across the package."""


class CurveSpecError(ValueError):
    """Malformed or invalid curve data (bad coefficients, bad JSON, bad preset)."""


class ConvexityError(CurveSpecError):
    """Curve fails strict convexity or is not positively (counterclockwise) oriented."""


class UnsupportedOrderError(ValueError):
    """A jet of higher order than the implementation provides was requested."""


class PhaseSpaceError(ValueError):
    """Billiard state lies outside the admissible phase space."""


class SolverError(RuntimeError):
    """Newton iteration failed to converge, or a critical point has the wrong type."""


class ExtractionError(RuntimeError):
    """Least-squares coefficient extraction is ill-conditioned or otherwise unusable."""
