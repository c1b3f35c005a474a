"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`GaincoolError`.
The CLI maps the three families onto exit codes: configuration problems (2),
physics problems (3) and numerical non-convergence (4).
"""


class GaincoolError(Exception):
    """Base class for all package errors."""


class ConfigError(GaincoolError):
    """Bad user input (file syntax or parameter invariants)."""


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ConfigError, ValueError):
    """A parameter invariant does not hold."""


class PhysicsError(GaincoolError):
    """The requested quantity does not exist for the given working point."""


class BelowThreshold(PhysicsError):
    pass


class ZeroGain(PhysicsError):
    pass


class AmbiguousSteadyState(PhysicsError):
    def __init__(self, message, roots=()):
        self.roots = tuple(roots)
        super().__init__(message)


class ModelMismatch(PhysicsError):
    pass


class UnstableSystem(PhysicsError):
    pass


class SingularResponse(PhysicsError):
    def __init__(self, omega):
        self.omega = omega
        super().__init__(f"response matrix is singular at omega = {omega!r}")


class NearSingularKappa(PhysicsError):
    pass


class HeatingConfiguration(PhysicsError):
    pass


class NoMinimumInBounds(PhysicsError):
    pass


class NonConvergedQuadrature(GaincoolError):
    def __init__(self, message, value=None, error=None):
        self.value = value
        self.error = error
        super().__init__(message)
