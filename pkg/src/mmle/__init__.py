"""Langevin-based maximum marginal likelihood estimation toolkit."""

from .dynamics import (
    Budget,
    NoiseStreams,
    RunRecord,
    SdeConfig,
    averaged_ula_run,
    ipla_run,
    pgd_run,
    sfla_run,
    soul_run,
)
from .errors import (
    ConfigurationError,
    DivergenceError,
    InstabilityError,
    MmleError,
    UnsupportedOracleError,
)
from .models import (
    ExamplePotential,
    GaussianHierarchicalModel,
    LogisticRegressionModel,
    Model,
    generate_logistic_data,
)

__version__ = "0.1.0"
