"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for all package-specific failures."""


class RegimeError(SimulationError):
    """Requested operation is outside its regime of validity."""


class DegenerateModeError(SimulationError):
    """Bloch block is already diagonal (b = 0); no rotation is defined."""


class InvalidStateError(SimulationError):
    """A SteadyState is inconsistent with the model parameters."""


class ZeroOverlapError(SimulationError):
    """The initial state has no overlap with the quasiparticle vacuum."""


class NumericalInstabilityError(SimulationError):
    """A numerical guard tripped (e.g. correlation spectrum outside [-1, 1])."""


class ResourceError(SimulationError):
    """Problem size exceeds a hard resource guard."""
