"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`KMuError`,
so callers (the CLI in particular) can separate bad input from bugs.
"""


class KMuError(Exception):
    """Base class for all package errors."""


class ShapeError(KMuError, ValueError):
    """Array dimensions are inconsistent."""


class DimensionError(KMuError, ValueError):
    """A dimension is outside the range an operation supports."""


class DegenerateInputError(KMuError, ValueError):
    """Input vectors are linearly dependent."""

    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__(
            f"vector {index} is linearly dependent on its predecessors "
            f"(residual norm {residual:.3e})"
        )


class InvalidPlaneError(KMuError, ValueError):
    """A plane section is not orthonormal or not tangent."""


class DomainError(KMuError, ValueError):
    """A parameter lies outside its mathematical domain."""


class MissingParameterError(KMuError, ValueError):
    pass


class InvalidStructureError(KMuError, ValueError):
    """The ambient structure fails its algebraic axioms."""

    def __init__(self, report):
        self.report = report
        worst = ", ".join(f"{k}={v:.3e}" for k, v in report.failures().items())
        super().__init__(f"structure fails validation: {worst}")


class InvalidSubmanifoldError(KMuError, ValueError):
    """Submanifold data fails validation in its declared mode."""

    def __init__(self, report):
        self.report = report
        worst = ", ".join(f"{k}={v:.3e}" for k, v in report.failures().items())
        super().__init__(f"{report.name} fails validation: {worst}")


class ModelFormatError(KMuError, ValueError):
    """A model file is not valid JSON or lacks required fields."""


class PreconditionError(KMuError, ValueError):
    pass


class HypothesisError(KMuError, ValueError):
    """The input does not satisfy the hypotheses of a theorem."""


class BudgetError(KMuError, RuntimeError):
    """A computation would exceed its configured budget."""


class ConsistencyError(KMuError, RuntimeError):
    """Two independent evaluations of the same quantity disagree."""
