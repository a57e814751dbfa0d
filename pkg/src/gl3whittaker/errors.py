"""Exception types shared across the package."""


class PoleError(ArithmeticError):
    """Evaluation requested within the guard disk of a pole."""


class ContourPinchError(ArithmeticError):
    """A left-family pole approaches a right-family pole; no legal contour."""


class InadmissibleError(ValueError):
    """The (w, n) combination is excluded by the degeneracy table."""


class DivergenceRegionError(ValueError):
    """Spectral parameters outside the region of absolute convergence."""


class TableExhaustedError(LookupError):
    """A Hecke eigenvalue beyond the ingested table was requested."""


class ConvergenceError(ArithmeticError):
    """Quadrature failed to meet its accuracy target; carries the residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
