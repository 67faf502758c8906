"""Finite-alphabet information measures and their betting/coding/market uses."""

from .errors import (
    ConfigError,
    DegenerateModelError,
    DimensionMismatchError,
    DomainError,
    FitConvergenceError,
    HorizonTooLargeError,
    IngestError,
    InvalidDistributionError,
    ModelInconsistencyError,
    PraginfoError,
    ReducibleChainError,
    SupportError,
)
from .info_core import (
    Distribution,
    JointDistribution,
    as_distribution,
    as_joint,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    gaussian_entropy,
    mutual_information,
    relative_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateModelError",
    "DimensionMismatchError",
    "DomainError",
    "FitConvergenceError",
    "HorizonTooLargeError",
    "IngestError",
    "InvalidDistributionError",
    "ModelInconsistencyError",
    "PraginfoError",
    "ReducibleChainError",
    "SupportError",
    "Distribution",
    "JointDistribution",
    "as_distribution",
    "as_joint",
    "conditional_entropy",
    "conditional_mutual_information",
    "entropy",
    "gaussian_entropy",
    "mutual_information",
    "relative_entropy",
    "__version__",
]
