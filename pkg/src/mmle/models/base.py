"""Latent-variable model interface used by the samplers and probes."""
from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError


def as_theta(theta, d_theta: int) -> np.ndarray:
    """Coerce ``theta`` to a float vector of shape ``(d_theta,)``."""
    arr = np.asarray(theta, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape != (d_theta,):
        raise ConfigurationError(
            f"theta has shape {arr.shape}, expected ({d_theta},)"
        )
    return arr


def as_latent(x, d_x: int) -> np.ndarray:
    """Coerce ``x`` to shape ``(d_x,)`` or a batch ``(n, d_x)``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1 and arr.shape == (d_x,):
        return arr
    if arr.ndim == 2 and arr.shape[1] == d_x:
        return arr
    raise ConfigurationError(
        f"x has shape {arr.shape}, expected ({d_x},) or (n, {d_x})"
    )


class Model:
    """Evaluates the joint negative log-density U(theta, x) and its gradients.

    Implementations are immutable after construction and safe to call from
    many threads.  ``grad_x`` and ``grad_theta`` accept either a single latent
    state of shape ``(d_x,)`` or a particle batch of shape ``(n, d_x)``
    evaluated at one shared ``theta``; batched calls return one gradient row
    per particle.
    """

    d_theta: int
    d_x: int

    def potential(self, theta, x) -> float:
        raise NotImplementedError

    def grad_theta(self, theta, x) -> np.ndarray:
        raise NotImplementedError

    def grad_x(self, theta, x) -> np.ndarray:
        raise NotImplementedError

    def grad_joint(self, theta, x) -> np.ndarray:
        """Gradient of U in the stacked variable z = (theta, x)."""
        return np.concatenate([self.grad_theta(theta, x), self.grad_x(theta, x)])
