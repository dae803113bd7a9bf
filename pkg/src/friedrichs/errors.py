"""Exception hierarchy."""


class NumericError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class SingularInputError(NumericError, ValueError):
    """Evaluation requested at a singular point of the function."""


class OverflowRegionError(NumericError):
    """The Gaussian continuation term leaves the representable range."""


class BoundaryZeroError(NumericError):
    """A zero lies on, or too close to, the contour of a search box."""


class NotFoundError(NumericError):
    """No sign change or root was found where one was requested."""
