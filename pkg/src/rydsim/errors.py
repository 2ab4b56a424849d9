"""Exception types shared across the package."""


class RydsimError(Exception):
    """Base class for all rydsim errors."""


class InvalidParameterError(RydsimError, ValueError):
    """A physical or configuration parameter is out of its allowed range."""


class DomainError(RydsimError, ValueError):
    """A time argument falls outside the domain of a pulse or segment."""


class DegeneratePointError(RydsimError, ValueError):
    """An eigensystem or monitor was requested at a degenerate point (Omega = Delta = 0)."""


class InfeasibleError(RydsimError, ValueError):
    """A calibration target cannot be reached with the given constraints."""


class ContractViolationError(RydsimError, ValueError):
    """An input state violates a documented precondition (e.g. Rydberg population)."""


class DimensionMismatchError(RydsimError, ValueError):
    """Operands act on different Hilbert spaces."""


class IntegrationError(RydsimError, RuntimeError):
    """Numerical propagation failed.

    Carries the time at which the integrator gave up, when known.
    """

    def __init__(self, message: str, time: float | None = None):
        super().__init__(message)
        self.time = time
