"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all physics and configuration failures."""


class DomainError(SimulationError):
    """Physical input outside the supported validity range."""


class FitError(SimulationError):
    """A parameter fit could not reach its target residual."""


class ConfigError(SimulationError):
    """Invalid or inconsistent run configuration."""


class EmptyStateError(SimulationError):
    """An operation produced or received a state with zero total power."""


class ContractError(SimulationError):
    """API precondition violated (for example an unnormalized tensor)."""


class ConvergenceError(SimulationError):
    """A reference integration did not converge at the requested resolution."""
