"""Hierarchical Gaussian location model with a complete analytic oracle.

Generative structure: x_j ~ N(theta, sigma_x^2) independently for
j = 1..d_x, and y_j | x_j ~ N(x_j, sigma_y^2).  The parameter theta is
scalar.  Everything of interest (marginal likelihood, its gradient, the
maximiser, the exact EM map, posterior moments, the joint Hessian) is
available in closed form, which makes this model the ground-truth oracle
for every sampler and scaling study in the package.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError
from .base import Model, as_latent, as_theta


class GaussianHierarchicalModel(Model):
    """Gaussian hierarchical model with observations ``y``.

    The potential drops the additive normalisation constants of the joint
    density:

        U(theta, x) = sum_j (y_j - x_j)^2 / (2 sigma_y^2)
                    + sum_j (x_j - theta)^2 / (2 sigma_x^2)

    i.e. U = -log p_theta(x, y) - c0 with the fixed constant
    c0 = (d_x/2) [log(2 pi sigma_x^2) + log(2 pi sigma_y^2)].  Accordingly
    :meth:`marginal_log_likelihood` returns log int exp(-U) dx, which differs
    from the true log p_theta(y) by the same c0; only gradients and
    differences of these quantities enter any algorithm.
    """

    d_theta = 1

    def __init__(self, y, sigma_x: float, sigma_y: float):
        y = np.asarray(y, dtype=float)
        if y.ndim != 1 or y.size < 1:
            raise ConfigurationError("y must be a non-empty 1-d vector (d_x >= 1)")
        if not (sigma_x > 0 and sigma_y > 0):
            raise ConfigurationError("sigma_x and sigma_y must be positive")
        self.y = y.copy()
        self.y.setflags(write=False)
        self.sigma_x = float(sigma_x)
        self.sigma_y = float(sigma_y)
        self.d_x = int(y.size)
        self._vx = self.sigma_x**2
        self._vy = self.sigma_y**2
        self._vsum = self._vx + self._vy

    @classmethod
    def synthetic(cls, d_x: int, theta_true: float, sigma_x: float,
                  sigma_y: float, seed: int) -> "GaussianHierarchicalModel":
        """Draw y from the generative model at ``theta_true``."""
        if d_x < 1:
            raise ConfigurationError("d_x must be >= 1")
        rng = np.random.default_rng(seed)
        x_true = theta_true + sigma_x * rng.standard_normal(d_x)
        y = x_true + sigma_y * rng.standard_normal(d_x)
        return cls(y, sigma_x, sigma_y)

    # evaluation interface

    def potential(self, theta, x) -> float:
        th = as_theta(theta, 1)[0]
        x = as_latent(x, self.d_x)
        lik = np.sum((self.y - x) ** 2, axis=-1) / (2.0 * self._vy)
        pri = np.sum((x - th) ** 2, axis=-1) / (2.0 * self._vx)
        return float(lik + pri)

    def grad_theta(self, theta, x) -> np.ndarray:
        th = as_theta(theta, 1)[0]
        x = as_latent(x, self.d_x)
        g = (self.d_x * th - x.sum(axis=-1)) / self._vx
        if x.ndim == 2:
            return g[:, None]
        return np.array([g])

    def grad_x(self, theta, x) -> np.ndarray:
        th = as_theta(theta, 1)[0]
        x = as_latent(x, self.d_x)
        return (x - self.y) / self._vy + (x - th) / self._vx

    # analytic oracle

    def marginal_log_likelihood(self, theta) -> float:
        """log int exp(-U(theta, x)) dx, in closed form.

        Equals -sum_j (y_j - theta)^2 / (2 (sigma_x^2 + sigma_y^2)) plus the
        fixed constant (d_x/2) log(2 pi sigma_x^2 sigma_y^2 / (sigma_x^2 +
        sigma_y^2)).
        """
        th = as_theta(theta, 1)[0]
        quad = -np.sum((self.y - th) ** 2) / (2.0 * self._vsum)
        const = 0.5 * self.d_x * np.log(2.0 * np.pi * self._vx * self._vy / self._vsum)
        return float(quad + const)

    def grad_marginal(self, theta) -> np.ndarray:
        th = as_theta(theta, 1)[0]
        return np.array([np.sum(self.y - th) / self._vsum])

    def mmle(self) -> np.ndarray:
        """The unique maximiser of the marginal log-likelihood: mean(y)."""
        return np.array([self.y.mean()])

    def exact_em_step(self, theta) -> np.ndarray:
        """One exact EM update; contracts towards mean(y) at rate
        sigma_y^2 / (sigma_x^2 + sigma_y^2)."""
        th = as_theta(theta, 1)[0]
        return np.array([(self._vx * self.y.mean() + self._vy * th) / self._vsum])

    def posterior_mean(self, theta) -> np.ndarray:
        th = as_theta(theta, 1)[0]
        return (self._vx * self.y + self._vy * th) / self._vsum

    @property
    def posterior_var(self) -> float:
        """Per-coordinate posterior variance of x given y (theta-independent)."""
        return self._vx * self._vy / self._vsum

    @property
    def marginal_curvature(self) -> float:
        """-d^2/dtheta^2 log p_theta(y) = d_x / (sigma_x^2 + sigma_y^2)."""
        return self.d_x / self._vsum

    def hessian(self) -> np.ndarray:
        """Constant joint Hessian of U in z = (theta, x)."""
        d = self.d_x
        h = np.zeros((1 + d, 1 + d))
        h[0, 0] = d / self._vx
        h[0, 1:] = -1.0 / self._vx
        h[1:, 0] = -1.0 / self._vx
        h[1:, 1:] = (1.0 / self._vx + 1.0 / self._vy) * np.eye(d)
        return h

    def hessian_blocks(self):
        h = self.hessian()
        return h[:1, :1], h[:1, 1:], h[1:, 1:]

    def joint_convexity_constant(self) -> float:
        """Smallest eigenvalue of the (constant) joint Hessian."""
        return float(np.linalg.eigvalsh(self.hessian())[0])
