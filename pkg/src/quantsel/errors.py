"""Exception types raised across the package."""


class QuantselError(Exception):
    """Base class for all package errors."""


class InvalidInput(QuantselError, ValueError):
    pass


class DegenerateHull(QuantselError):
    """The point set does not span a full-dimensional hull."""

    def __init__(self, dim, message=None):
        self.dim = dim
        super().__init__(message or f"hull is degenerate (affine dimension {dim})")


class DegeneratePosition(QuantselError):
    pass


class NotPositiveDefinite(QuantselError, ValueError):
    pass


class OptimizerFailed(QuantselError):
    pass


class NotFound(QuantselError):
    """A search finished without producing a certificate."""

    def __init__(self, message="no certificate found", diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class SearchExhausted(NotFound):
    pass


class PreconditionFailed(QuantselError):
    pass


class TooFewBodies(QuantselError, ValueError):
    pass


class HalvingDegenerate(QuantselError):
    pass


class Unsupported(QuantselError, NotImplementedError):
    pass
