"""Exception hierarchy shared by all modules."""


class PhaseMatrixError(ValueError):
    """Base class for every error raised by the package."""


class SingularCoefficientError(PhaseMatrixError):
    """Leading coefficient P of a template ODE vanishes."""


class ZeroIntegratingFactorError(PhaseMatrixError):
    pass


class NearSingularError(PhaseMatrixError):
    pass


class IntegrationError(PhaseMatrixError):
    """Coefficient evaluation produced a non-finite value during integration."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class BracketError(PhaseMatrixError):
    pass


class ConvergenceError(PhaseMatrixError):
    pass


class SingularPointError(PhaseMatrixError):
    pass


class InvalidSpecError(PhaseMatrixError):
    pass


class InvalidParameterError(PhaseMatrixError):
    pass


class UnboundParameterError(PhaseMatrixError):
    pass


class GridError(PhaseMatrixError):
    pass


class DegenerateStateError(PhaseMatrixError):
    pass


class NoBoundStatesError(PhaseMatrixError):
    pass
