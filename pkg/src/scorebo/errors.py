"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid user-supplied configuration (bad grid bounds, budgets, flags)."""


class SurrogateError(RuntimeError):
    """Gaussian-process fit could not be completed even after jitter escalation."""


class SolverError(RuntimeError):
    """An implicit-equation solve failed (bracket expansion exhausted, etc.)."""


class SpaceExhausted(Exception):
    """Every combination in the search space has been evaluated; normal termination."""
