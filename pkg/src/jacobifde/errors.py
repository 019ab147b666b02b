"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the function is defined."""


class ConvergenceError(RuntimeError):
    """An iterative procedure (series, eigensolve) failed to converge."""


class NonFiniteError(ValueError):
    """A sampled function value was NaN or infinite."""


class ConfigError(ValueError):
    """Invalid command-line configuration."""
