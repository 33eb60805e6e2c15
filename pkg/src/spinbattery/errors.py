"""Exception types raised by the engine."""


class ConfigError(ValueError):
    """Invalid parameters or scenario configuration.

    ``field`` names the offending configuration key when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ResourceLimitError(RuntimeError):
    """Hilbert-space dimension exceeds the configured cap."""

    def __init__(self, message, two_j=None, n_sites=None, dim=None):
        super().__init__(message)
        self.two_j = two_j
        self.n_sites = n_sites
        self.dim = dim


class DegenerateSpectrumError(ValueError):
    """Raised when a Hamiltonian is proportional to the identity."""


class DegenerateGroundStateWarning(UserWarning):
    pass


class SearchWindowWarning(UserWarning):
    """An optimum landed on the edge of the scanned window."""


class RealizationError(RuntimeError):
    """Too many disorder realizations failed."""

    def __init__(self, message, failed_indices=()):
        super().__init__(message)
        self.failed_indices = tuple(failed_indices)
