"""Semantic exception hierarchy. Public functions raise these, never bare ValueError."""


class PraginfoError(Exception):
    """Base error for the package."""


class InvalidDistributionError(PraginfoError, ValueError):
    """Probability vector violates its contract (negative entry, bad sum, empty)."""


class DimensionMismatchError(PraginfoError, ValueError):
    """Two objects that must share an alphabet or shape do not."""


class DomainError(PraginfoError, ValueError):
    """Scalar parameter outside its domain (non-positive sigma, payoff, ...)."""


class SupportError(PraginfoError, ValueError):
    """A code or bound requires q > 0 wherever p > 0, and it is not."""


class ReducibleChainError(PraginfoError, ValueError):
    """Markov chain is not irreducible; no unique stationary distribution."""


class HorizonTooLargeError(PraginfoError, ValueError):
    """Exact block unrolling would exceed the table-size cap."""


class ModelInconsistencyError(PraginfoError, ValueError):
    """A simulated path has zero likelihood under a model marginal."""


class DegenerateModelError(PraginfoError, ValueError):
    """Log-optimal growth is -inf for every allocation (all-zero outcome)."""


class FitConvergenceError(PraginfoError, RuntimeError):
    """Likelihood optimizer failed to converge."""


class IngestError(PraginfoError, ValueError):
    """Return-series file is missing, malformed, or has invalid rows."""


class ConfigError(PraginfoError, ValueError):
    """Scenario configuration is malformed or incomplete."""
