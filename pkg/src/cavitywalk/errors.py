"""Exception hierarchy for cavitywalk.

Every error raised by the library derives from CavityWalkError so callers
can catch library failures in one clause.  The CLI maps subclasses onto
exit codes: configuration problems, numerical-contract violations, and
truncation/resolution inadequacies are kept distinct because they call
for different fixes (edit the config, change parameters, enlarge the
basis or grid).
"""


class CavityWalkError(Exception):
    """Base class for all cavitywalk errors."""


class ConfigError(CavityWalkError):
    """Invalid or unknown configuration input (CLI exit code 2)."""


class ParameterDomainError(CavityWalkError):
    """Physical parameters outside the domain an operation supports."""


class ConventionError(CavityWalkError):
    """Coordinate or drive-phase convention violated.

    Raised when real-center coordinates are requested for complex
    amplitudes, or when the effective Hamiltonian is built from a drive
    whose phase does not satisfy E*^2/|E|^2 = 1.
    """


class MeasurementImpossibleError(CavityWalkError):
    """A conditional measurement outcome has zero probability."""


class TruncationError(CavityWalkError):
    """Fock-space cutoff too small for the requested amplitude.

    Carries the achieved tail mass so callers can size the basis.
    """

    def __init__(self, message: str, tail_mass: float | None = None):
        super().__init__(message)
        self.tail_mass = tail_mass


class ResolutionError(CavityWalkError):
    """Grid too coarse or too small for the requested computation."""


class IntegrationError(CavityWalkError):
    """Time integration failed to converge or violated a conservation law.

    Carries the residual achieved when the step cap was reached.
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual
