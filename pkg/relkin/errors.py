class RelkinError(Exception):
    """Base class for every error raised by relkin."""


class DomainError(RelkinError, ValueError):
    """Input lies outside the domain on which an operation is defined."""


class PreconditionError(DomainError):
    """A documented precondition of an operation does not hold."""


class RestStateError(DomainError):
    """
    The state is at rest: the rapidity is zero but the counter-rapidity diverges.
    :param psi: the rapidity, still well defined (zero)
    """

    def __init__(self, message, psi=0.0):
        super().__init__(message)
        self.psi = psi


class LightSpeedStateError(DomainError):
    """
    The state is lightlike: the rapidity diverges, the counter-rapidity is zero and the
    counter-mass equals the energy.
    """

    def __init__(self, message, phi, pi0):
        super().__init__(message)
        self.chi = 0.0
        self.phi = phi
        self.pi0 = pi0


class IntegrationError(RelkinError, RuntimeError):
    """An integration step was rejected because an invariant drifted past its bound."""


class ConvergenceError(RelkinError, RuntimeError):
    """An iterative solver failed to reach its residual tolerance."""
