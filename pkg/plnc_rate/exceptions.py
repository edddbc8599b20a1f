class RelayModelError(ValueError):
    """Parent class of all exceptions raised by this module."""
    pass


class ParameterDomainError(RelayModelError):
    """Exception raised when parameters fall outside the domain where the model is defined."""
    pass


class NumericalError(RelayModelError):
    """Parent class of exceptions raised when a numerical evaluation fails."""
    pass


class QuadratureError(NumericalError):
    """Exception raised when an adaptive quadrature does not meet its tolerances."""
    pass


class ConsistencyError(NumericalError):
    """Exception raised when a computed quantity violates an internal invariant."""
    pass
