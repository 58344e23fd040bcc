"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: config errors -> 2, convergence and
stiffness errors -> 3, I/O errors -> 4.
"""


class BosonKineticsError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(BosonKineticsError, ValueError):
    """A physical or numerical parameter violates its constraint."""


class OutOfBandError(BosonKineticsError, ValueError):
    """An energy argument lies outside the open band (-2J, 2J)."""


class DomainError(BosonKineticsError, ValueError):
    """A distribution formula was evaluated outside its domain
    (e.g. chemical potential on the wrong side of the band)."""


class DegenerateExpansionError(BosonKineticsError, ValueError):
    """A perturbative formula was requested at a degenerate point
    (Delta = 0 or beta0 = 0) where the expansion does not exist."""


class ConvergenceError(BosonKineticsError, RuntimeError):
    """Time marching did not reach the requested residual before tau_max.

    Carries the residual history accumulated so far.
    """

    def __init__(self, message, residual_history=None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])


class StiffnessError(BosonKineticsError, RuntimeError):
    """The adaptive integrator underflowed its step size.

    Carries the offending state so the failure can be inspected.
    """

    def __init__(self, message, tau=None, state=None):
        super().__init__(message)
        self.tau = tau
        self.state = state


class UndefinedDivergenceError(BosonKineticsError, ValueError):
    """KL divergence undefined: no mode has positive values in both inputs."""


class ConfigError(BosonKineticsError, ValueError):
    """A run configuration document is malformed or violates an invariant."""
