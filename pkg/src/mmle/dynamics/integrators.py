"""Euler-Maruyama integrators for the five estimation algorithms.

All integrators are deterministic given (config, seed), evaluate every
gradient at pre-update values (fully explicit updates), count gradient
evaluations exactly, and abort with the step index on the first non-finite
coordinate - no clipping, so stiffness shows up as divergence rather than
being masked.
"""
from __future__ import annotations

import math
import time

import numpy as np

from ..errors import ConfigurationError, DivergenceError, UnsupportedOracleError
from ..models.base import Model
from .config import SdeConfig
from .record import PathRecorder, RunRecord
from .streams import NoiseStreams


def _check_finite(step: int, *arrays) -> None:
    # a non-finite coordinate makes the sum non-finite, so one scalar test
    # per array suffices
    for arr in arrays:
        if not math.isfinite(float(arr.sum())):
            raise DivergenceError(f"non-finite state at step {step}", step=step)


def _fsum_mean(g: np.ndarray) -> np.ndarray:
    """Exactly-rounded column means; invariant under particle permutation."""
    n = g.shape[0]
    return np.array([math.fsum(g[:, j]) / n for j in range(g.shape[1])])


class _SflaStepper:
    """Slow-fast pair: theta and a single latent chain on time scale 1/eps."""

    def __init__(self, model: Model, cfg: SdeConfig, streams: NoiseStreams):
        cfg.require("delta", "epsilon", "beta")
        self.model = model
        self.streams = streams
        self.theta = cfg.theta0.copy()
        self.x = np.asarray(cfg.x0, dtype=float).reshape(model.d_x).copy()
        self.delta = cfg.delta
        self.ratio = cfg.delta / cfg.epsilon
        self.noise_theta = math.sqrt(2.0 * cfg.delta / cfg.beta)
        self.noise_x = math.sqrt(2.0 * cfg.delta / cfg.epsilon)
        self.grads_per_step = 2

    def step(self, k: int) -> None:
        gt = self.model.grad_theta(self.theta, self.x)
        gx = self.model.grad_x(self.theta, self.x)
        self.theta = (
            self.theta - self.delta * gt
            + self.noise_theta * self.streams.theta.standard_normal(self.theta.size)
        )
        self.x = (
            self.x - self.ratio * gx
            + self.noise_x * self.streams.latent.standard_normal(self.x.size)
        )
        _check_finite(k, self.theta, self.x)

    def final_state(self) -> np.ndarray:
        return self.x


class _SoulStepper:
    """Outer step: M inner unadjusted-Langevin updates of x (warm-started),
    then a noiseless theta update averaging the theta-gradient over the last
    M_tilde inner states.  Here M_tilde = M = n_inner (no burn-in)."""

    def __init__(self, model: Model, cfg: SdeConfig, streams: NoiseStreams):
        cfg_problems = cfg.diagnostics()
        if cfg.delta is None:
            cfg_problems.append("delta: required by soul")
        if cfg.gamma is None:
            cfg_problems.append("gamma: required by soul")
        if cfg.n_inner is None:
            cfg_problems.append("n_inner: required by soul")
        if cfg_problems:
            raise ConfigurationError("; ".join(cfg_problems))
        self.model = model
        self.streams = streams
        self.theta = cfg.theta0.copy()
        self.x = np.asarray(cfg.x0, dtype=float).reshape(model.d_x).copy()
        self.delta = cfg.delta
        self.gamma = cfg.gamma
        self.m = cfg.n_inner
        self.noise_x = math.sqrt(2.0 * cfg.gamma)
        self.grads_per_step = 2 * self.m

    def step(self, k: int) -> None:
        theta = self.theta
        x = self.x
        gsum = np.zeros_like(theta)
        for _ in range(self.m):
            gx = self.model.grad_x(theta, x)
            x = (
                x - self.gamma * gx
                + self.noise_x * self.streams.latent.standard_normal(x.size)
            )
            gsum += self.model.grad_theta(theta, x)
        self.theta = theta - (self.delta / self.m) * gsum
        self.x = x
        _check_finite(k, self.theta, self.x)

    def final_state(self) -> np.ndarray:
        return self.x


class _PgdStepper:
    """N latent particles, deterministic theta update from the cloud mean.

    Noise for the whole cloud is pre-drawn as one (N, d_x) block each step,
    and the cloud-mean drift uses exactly-rounded summation, so the result
    is identical to any sequential or parallel particle update order.
    """

    theta_noise = False

    def __init__(self, model: Model, cfg: SdeConfig, streams: NoiseStreams):
        cfg.require("gamma", "n_inner")
        self.model = model
        self.streams = streams
        self.theta = cfg.theta0.copy()
        x0 = np.asarray(cfg.x0, dtype=float)
        n = cfg.n_inner
        if x0.ndim == 1:
            self.cloud = np.tile(x0.reshape(model.d_x), (n, 1))
        elif x0.shape == (n, model.d_x):
            self.cloud = x0.copy()
        else:
            raise ConfigurationError(
                f"x0 shape {x0.shape} incompatible with {n} particles of dim {model.d_x}"
            )
        self.n = n
        self.gamma = cfg.gamma
        self.noise_x = math.sqrt(2.0 * cfg.gamma)
        self.noise_theta = math.sqrt(2.0 * cfg.gamma / n)
        self.grads_per_step = 2 * n

    def step(self, k: int) -> None:
        gt = self.model.grad_theta(self.theta, self.cloud)
        gx = self.model.grad_x(self.theta, self.cloud)
        theta = self.theta - self.gamma * _fsum_mean(gt)
        if self.theta_noise:
            theta = theta + self.noise_theta * self.streams.theta.standard_normal(
                self.theta.size
            )
        self.cloud = (
            self.cloud - self.gamma * gx
            + self.noise_x * self.streams.latent.standard_normal(self.cloud.shape)
        )
        self.theta = theta
        _check_finite(k, self.theta, self.cloud)

    def final_state(self) -> np.ndarray:
        return self.cloud


class _IplaStepper(_PgdStepper):
    """PGD plus sqrt(2 gamma / N) noise on the theta update."""

    theta_noise = True


class _AveragedUlaStepper:
    """Noisy gradient ascent directly on the marginal log-likelihood oracle."""

    def __init__(self, model, cfg: SdeConfig, streams: NoiseStreams):
        if not hasattr(model, "grad_marginal"):
            raise UnsupportedOracleError(
                f"{type(model).__name__} exposes no analytic marginal gradient"
            )
        cfg.require("delta", "beta")
        self.model = model
        self.streams = streams
        self.theta = cfg.theta0.copy()
        self.delta = cfg.delta
        self.noise_theta = math.sqrt(2.0 * cfg.delta / cfg.beta)
        self.grads_per_step = 1

    def step(self, k: int) -> None:
        g = self.model.grad_marginal(self.theta)
        self.theta = (
            self.theta + self.delta * g
            + self.noise_theta * self.streams.theta.standard_normal(self.theta.size)
        )
        _check_finite(k, self.theta)

    def final_state(self) -> np.ndarray:
        return np.zeros(0)


def step_budget_loop(stepper, cfg: SdeConfig, algorithm: str) -> RunRecord:
    """Drive a stepper until its budget is exhausted, thinning the path."""
    budget = cfg.budget
    problems = budget.diagnostics()
    if problems:
        raise ConfigurationError("; ".join(problems))
    recorder = PathRecorder(cfg.thin_stride, cfg.max_path_samples)
    wall = cfg.record_wall_clock or budget.kind == "seconds"
    t0 = time.perf_counter()
    recorder.record(0, 0, 0.0, stepper.theta)
    k = 0
    grads = 0
    cost = stepper.grads_per_step
    while True:
        if budget.max_steps is not None and k >= budget.max_steps:
            break
        if budget.max_grad_evals is not None and grads + cost > budget.max_grad_evals:
            break
        elapsed = time.perf_counter() - t0
        if budget.max_seconds is not None and elapsed >= budget.max_seconds:
            break
        stepper.step(k)
        k += 1
        grads += cost
        recorder.record(k, grads, time.perf_counter() - t0, stepper.theta)
    steps, grad_evals, elapsed_s, thetas = recorder.arrays()
    return RunRecord(
        algorithm=algorithm,
        config=cfg.snapshot(algorithm),
        steps=steps,
        grad_evals=grad_evals,
        elapsed_s=elapsed_s,
        thetas=thetas,
        stride=recorder.stride,
        theta_final=stepper.theta.copy(),
        x_final=np.array(stepper.final_state(), dtype=float, copy=True),
        total_steps=k,
        total_grad_evals=grads,
        wall_seconds=time.perf_counter() - t0,
        wall_clock_recorded=wall,
    )


def _run(stepper_cls, algorithm: str, model, cfg: SdeConfig, streams=None) -> RunRecord:
    if streams is None:
        streams = NoiseStreams.from_seed(cfg.seed)
    stepper = stepper_cls(model, cfg, streams)
    return step_budget_loop(stepper, cfg, algorithm)


def sfla_run(model, cfg: SdeConfig, streams=None) -> RunRecord:
    """theta_{k+1} = theta_k - delta grad_theta U + sqrt(2 delta/beta) xi1,
    X_{k+1} = X_k - (delta/eps) grad_x U + sqrt(2 delta/eps) xi2, both
    gradients at the pre-update (theta_k, X_k).  2 gradient evals per step."""
    return _run(_SflaStepper, "sfla", model, cfg, streams)


def soul_run(model, cfg: SdeConfig, streams=None) -> RunRecord:
    """Warm-started inner ULA chain plus averaged-gradient theta update;
    M + M_tilde gradient evals per outer step."""
    return _run(_SoulStepper, "soul", model, cfg, streams)


def pgd_run(model, cfg: SdeConfig, streams=None) -> RunRecord:
    """Particle gradient descent; 2N gradient evals per step."""
    return _run(_PgdStepper, "pgd", model, cfg, streams)


def ipla_run(model, cfg: SdeConfig, streams=None) -> RunRecord:
    """Interacting-particle Langevin: PGD plus sqrt(2 gamma/N) theta noise;
    2N gradient evals per step."""
    return _run(_IplaStepper, "ipla", model, cfg, streams)


def averaged_ula_run(model, cfg: SdeConfig, streams=None) -> RunRecord:
    """Reference chain on the analytic marginal gradient; 1 eval per step."""
    return _run(_AveragedUlaStepper, "averaged_ula", model, cfg, streams)


RUNNERS = {
    "sfla": sfla_run,
    "soul": soul_run,
    "pgd": pgd_run,
    "ipla": ipla_run,
    "averaged_ula": averaged_ula_run,
}
