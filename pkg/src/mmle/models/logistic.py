"""Bayesian logistic regression with a scalar prior-mean parameter."""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from .base import Model, as_latent, as_theta


def sigmoid(w):
    """Logistic sigmoid, overflow-safe for any float input."""
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(w, dtype=float)))


def log_sigmoid(w):
    """log s(w) = -log(1 + exp(-w)) evaluated without overflow."""
    return -np.logaddexp(0.0, -np.asarray(w, dtype=float))


class LogisticRegressionModel(Model):
    """Labels y_i in {0,1} with covariates v_i and prior x ~ N(theta*1, sigma^2 I).

    U(theta, x) = (d_x/2) log(2 pi sigma^2)
                - sum_i [y_i log s(v_i.x) + (1 - y_i) log s(-v_i.x)]
                + ||x - theta*1||^2 / (2 sigma^2)

    so that exp(-U) integrates (over x) to the marginal likelihood.  The
    log-likelihood terms are evaluated in log space; Langevin trajectories
    routinely visit |v_i.x| > 30 early on.
    """

    d_theta = 1

    def __init__(self, labels, covariates, sigma: float):
        labels = np.asarray(labels, dtype=float)
        covariates = np.asarray(covariates, dtype=float)
        if labels.ndim != 1 or labels.size < 1:
            raise ConfigurationError("labels must be a non-empty 1-d vector")
        if covariates.ndim != 2 or covariates.shape[0] != labels.size:
            raise ConfigurationError(
                f"covariates shape {covariates.shape} does not match "
                f"{labels.size} labels"
            )
        if not np.isin(labels, (0.0, 1.0)).all():
            raise ConfigurationError("labels must be 0 or 1")
        if not sigma > 0:
            raise ConfigurationError("sigma must be positive")
        self.labels = labels.copy()
        self.covariates = covariates.copy()
        self.labels.setflags(write=False)
        self.covariates.setflags(write=False)
        self.sigma = float(sigma)
        self.d_y = int(labels.size)
        self.d_x = int(covariates.shape[1])
        self._v2 = self.sigma**2

    def potential(self, theta, x) -> float:
        th = as_theta(theta, 1)[0]
        x = as_latent(x, self.d_x)
        w = self.covariates @ x
        loglik = self.labels @ log_sigmoid(w) + (1.0 - self.labels) @ log_sigmoid(-w)
        const = 0.5 * self.d_x * np.log(2.0 * np.pi * self._v2)
        prior = np.sum((x - th) ** 2) / (2.0 * self._v2)
        return float(const - loglik + prior)

    def grad_theta(self, theta, x) -> np.ndarray:
        th = as_theta(theta, 1)[0]
        x = as_latent(x, self.d_x)
        g = (self.d_x * th - x.sum(axis=-1)) / self._v2
        if x.ndim == 2:
            return g[:, None]
        return np.array([g])

    def grad_x(self, theta, x) -> np.ndarray:
        th = as_theta(theta, 1)[0]
        x = as_latent(x, self.d_x)
        w = x @ self.covariates.T
        resid = sigmoid(w) - self.labels
        return resid @ self.covariates + (x - th) / self._v2


def generate_logistic_data(d_x: int, d_y: int, theta_true: float, sigma: float,
                           seed: int) -> LogisticRegressionModel:
    """Synthesise a logistic dataset from the generative model.

    Covariates are standard normal scaled by 1/sqrt(d_x) (keeps the gradient
    Lipschitz constant roughly dimension-independent), the latent truth is a
    prior draw at ``theta_true``, and labels are Bernoulli(s(v_i.x)).
    Bit-identical output for identical arguments.
    """
    if d_x < 1 or d_y < 1:
        raise ConfigurationError("d_x and d_y must be >= 1")
    if not sigma > 0:
        raise ConfigurationError("sigma must be positive")
    rng = np.random.default_rng(seed)
    covariates = rng.standard_normal((d_y, d_x)) / np.sqrt(d_x)
    x_true = theta_true + sigma * rng.standard_normal(d_x)
    labels = (rng.random(d_y) < sigmoid(covariates @ x_true)).astype(float)
    return LogisticRegressionModel(labels, covariates, sigma)
