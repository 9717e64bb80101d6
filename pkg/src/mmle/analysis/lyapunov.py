"""Exact stationary covariance of the linearised slow-fast system.

For quadratic potentials the coupled dynamics is a linear SDE with drift
matrix A = -[[H_tt, H_tx], [H_tx^T/eps, H_xx/eps]] and diffusion
D = diag(I/beta, I/eps); its stationary covariance solves the continuous
Lyapunov equation A S + S A^T = -2 D.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from ..errors import InstabilityError, UnsupportedOracleError

_RESIDUAL_TOL = 1e-10


def stationary_covariance_lyapunov(model, epsilon: float, beta: float) -> np.ndarray:
    """Stationary covariance of the slow-fast system for a quadratic model."""
    if not hasattr(model, "hessian_blocks"):
        raise UnsupportedOracleError(
            f"{type(model).__name__} has no constant-Hessian oracle"
        )
    h_tt, h_tx, h_xx = model.hessian_blocks()
    dt = h_tt.shape[0]
    dx = h_xx.shape[0]
    drift = -np.block([[h_tt, h_tx], [h_tx.T / epsilon, h_xx / epsilon]])
    eig_real = np.linalg.eigvals(drift).real
    if eig_real.max() >= 0:
        raise InstabilityError(
            f"drift matrix is not Hurwitz (max Re eig = {eig_real.max():.3g})"
        )
    diffusion = np.diag([1.0 / beta] * dt + [1.0 / epsilon] * dx)
    sigma = solve_continuous_lyapunov(drift, -2.0 * diffusion)
    sigma = 0.5 * (sigma + sigma.T)
    residual = np.linalg.norm(drift @ sigma + sigma @ drift.T + 2.0 * diffusion)
    if residual > _RESIDUAL_TOL * np.linalg.norm(diffusion):
        raise InstabilityError(f"Lyapunov residual too large: {residual:.3g}")
    return sigma


def slow_fast_theta_variance(model, epsilon: float, beta: float) -> float:
    """Stationary variance of scalar theta under the slow-fast dynamics."""
    return float(stationary_covariance_lyapunov(model, epsilon, beta)[0, 0])


def averaged_theta_variance(model, beta: float) -> float:
    """Stationary variance of scalar theta under the averaged dynamics,
    1 / (beta * marginal curvature)."""
    return 1.0 / (beta * model.marginal_curvature)
