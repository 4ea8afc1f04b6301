"""Exception types shared across the package."""


class PolysepError(Exception):
    """Base class for package-specific failures."""


class ConfigError(PolysepError, ValueError):
    """Invalid configuration value. ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class ContainerFormatError(PolysepError, ValueError):
    """Matrix container file is malformed or truncated."""


class ProjectionDidNotConverge(PolysepError, RuntimeError):
    """Alternating projection hit its sweep cap before reaching tolerance.

    ``last_iterate`` holds the final (feasible-cleaned) iterate, ``residual``
    the last observed sweep change.
    """

    def __init__(self, message, last_iterate, residual):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class RejectionCapExceeded(PolysepError, RuntimeError):
    """Rejection sampler ran out of attempts; carries the observed acceptance rate."""

    def __init__(self, message, acceptance_rate):
        super().__init__(message)
        self.acceptance_rate = acceptance_rate


class DivergenceError(PolysepError, FloatingPointError):
    """Neural dynamics or a batch solver produced non-finite values.

    ``iteration`` is the inner-loop index at detection; ``sample`` is filled in
    by the online training loop with the offending sample index.
    """

    def __init__(self, message, iteration=None, sample=None):
        super().__init__(message)
        self.iteration = iteration
        self.sample = sample
