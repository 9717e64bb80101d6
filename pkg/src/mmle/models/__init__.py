from .base import Model, as_latent, as_theta
from .example_potentials import ExamplePotential
from .gaussian import GaussianHierarchicalModel
from .logistic import (
    LogisticRegressionModel,
    generate_logistic_data,
    log_sigmoid,
    sigmoid,
)

__all__ = [
    "Model",
    "as_latent",
    "as_theta",
    "ExamplePotential",
    "GaussianHierarchicalModel",
    "LogisticRegressionModel",
    "generate_logistic_data",
    "log_sigmoid",
    "sigmoid",
]
