class SimulationError(Exception):
    """Base class for errors raised by the network simulator."""


class ConfigError(SimulationError, ValueError):
    pass


class BudgetExceeded(SimulationError):
    """The adversary asked for more corruptions than its budget allows."""


class CorruptionRejected(SimulationError):
    """The process is outside the run's corruption pool or already corrupted."""


class ForgeryRejected(SimulationError):
    """The adversary tried to act as (or read keys of) a correct process."""


class ConditioningExhausted(ConfigError):
    """No committee satisfying the sampling properties within the resample cap."""
