class ConfigurationError(ValueError):
    """Invalid parameters or configuration file contents."""


class DataError(ValueError):
    """Non-finite or otherwise corrupt particle data."""


class SimulationError(RuntimeError):
    """The particle state became non-finite during a run."""

    def __init__(self, message, step=None, particle=None):
        super().__init__(message)
        self.step = step
        self.particle = particle
