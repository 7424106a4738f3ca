"""Exception types shared across the package."""


class OrbitcertError(Exception):
    """Base class for all package errors."""


class PreconditionError(OrbitcertError):
    """An operation was called outside its contract."""


class EvaluationDomainError(OrbitcertError):
    """A test function was evaluated at a point outside its domain."""

    def __init__(self, point, message=None):
        self.point = point
        super().__init__(message or f"function not evaluable at point {point}")


class UnsatisfiableGoalError(OrbitcertError):
    """No admissible hit time was found within the documented search bound."""

    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"no admissible hit time within search bound {bound}")


class InsufficientDepthError(OrbitcertError):
    """A rotation interval was too wide for the requested decision."""

    def __init__(self, needed_depth, message=None):
        self.needed_depth = needed_depth
        super().__init__(
            message
            or f"continued-fraction depth insufficient; roughly depth {needed_depth} needed"
        )


class NotEigenChainError(OrbitcertError):
    """The successive-difference chain did not terminate in an eigenfunction."""

    def __init__(self, residuals, message=None):
        self.residuals = residuals
        super().__init__(message or "not an eigen-chain")


class ConstraintKindError(OrbitcertError):
    """A character constraint of an incompatible kind was supplied."""
