"""Run configuration for the stochastic integrators."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError


@dataclass(frozen=True)
class Budget:
    """Exactly one of the three termination criteria must be set."""

    max_steps: int | None = None
    max_seconds: float | None = None
    max_grad_evals: int | None = None

    def diagnostics(self) -> list[str]:
        set_kinds = [
            k for k, v in (
                ("max_steps", self.max_steps),
                ("max_seconds", self.max_seconds),
                ("max_grad_evals", self.max_grad_evals),
            ) if v is not None
        ]
        out = []
        if len(set_kinds) != 1:
            out.append(
                "budget: exactly one of max_steps, max_seconds, max_grad_evals "
                f"must be set (got {set_kinds or 'none'})"
            )
        if self.max_steps is not None and self.max_steps < 0:
            out.append("budget.max_steps: must be >= 0")
        if self.max_grad_evals is not None and self.max_grad_evals < 0:
            out.append("budget.max_grad_evals: must be >= 0")
        if self.max_seconds is not None and not self.max_seconds >= 0:
            out.append("budget.max_seconds: must be >= 0")
        return out

    @property
    def kind(self) -> str:
        if self.max_steps is not None:
            return "steps"
        if self.max_grad_evals is not None:
            return "grad_evals"
        return "seconds"


@dataclass
class SdeConfig:
    """All tunables of one run.

    Fields not used by a given algorithm may stay ``None``; each run
    entry-point validates the subset it needs.  ``beta = math.inf`` is
    accepted as the noiseless-parameter limit.  ``delta = 0`` is only legal
    for SOUL (frozen-parameter diagnostic mode).
    """

    seed: int
    theta0: np.ndarray
    x0: np.ndarray
    budget: Budget
    epsilon: float | None = None
    beta: float | None = None
    delta: float | None = None
    gamma: float | None = None
    n_inner: int | None = None
    thin_stride: int | None = None
    max_path_samples: int = 10_000
    record_wall_clock: bool = False

    def __post_init__(self):
        self.theta0 = np.atleast_1d(np.asarray(self.theta0, dtype=float))
        self.x0 = np.asarray(self.x0, dtype=float)

    def diagnostics(self) -> list[str]:
        out = list(self.budget.diagnostics())
        for name in ("epsilon", "beta", "gamma"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                out.append(f"{name}: must be > 0 (got {v})")
        if self.delta is not None and self.delta < 0:
            out.append(f"delta: must be >= 0 (got {self.delta})")
        if self.n_inner is not None and self.n_inner < 1:
            out.append(f"n_inner: must be >= 1 (got {self.n_inner})")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            out.append(f"seed: must be a non-negative integer (got {self.seed})")
        if self.thin_stride is not None and self.thin_stride < 1:
            out.append("thin_stride: must be >= 1")
        if self.max_path_samples < 1:
            out.append("max_path_samples: must be >= 1")
        return out

    def require(self, *names: str) -> None:
        """Raise unless every named field is present, positive where needed."""
        problems = self.diagnostics()
        for name in names:
            v = getattr(self, name)
            if v is None:
                problems.append(f"{name}: required by this algorithm")
            elif name == "delta" and not v > 0:
                problems.append(f"delta: must be > 0 for this algorithm")
        if problems:
            raise ConfigurationError("; ".join(problems))

    def snapshot(self, algorithm: str) -> dict:
        """JSON-ready snapshot embedded in every artifact."""
        def num(v):
            if v is None:
                return None
            if isinstance(v, float) and math.isinf(v):
                return "inf"
            return v

        return {
            "algorithm": algorithm,
            "seed": int(self.seed),
            "theta0": [float(t) for t in self.theta0],
            "x0": np.asarray(self.x0, dtype=float).reshape(-1).tolist(),
            "budget": {
                "max_steps": self.budget.max_steps,
                "max_seconds": self.budget.max_seconds,
                "max_grad_evals": self.budget.max_grad_evals,
            },
            "epsilon": num(self.epsilon),
            "beta": num(self.beta),
            "delta": num(self.delta),
            "gamma": num(self.gamma),
            "n_inner": self.n_inner,
            "thin_stride": self.thin_stride,
            "max_path_samples": self.max_path_samples,
            "record_wall_clock": self.record_wall_clock,
        }
