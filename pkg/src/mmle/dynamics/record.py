"""Trajectory records and their CSV/JSON serialisation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass
class RunRecord:
    """One algorithm trajectory.

    ``elapsed_s`` holds measured wall-clock samples; they are written to CSV
    only when the run recorded wall clock (seconds budget or explicit flag),
    otherwise the column is zero-filled so identical (config, seed) pairs
    reproduce byte-identical files.
    """

    algorithm: str
    config: dict
    steps: np.ndarray
    grad_evals: np.ndarray
    elapsed_s: np.ndarray
    thetas: np.ndarray
    stride: int
    theta_final: np.ndarray
    x_final: np.ndarray
    total_steps: int
    total_grad_evals: int
    wall_seconds: float
    wall_clock_recorded: bool

    @property
    def d_theta(self) -> int:
        return self.thetas.shape[1]

    def tail_thetas(self, frac: float = 0.5) -> np.ndarray:
        """Samples from the trailing ``frac`` of the recorded path."""
        n = len(self.steps)
        return self.thetas[int(round(n * (1.0 - frac))):]

    def csv_rows(self):
        elapsed = self.elapsed_s if self.wall_clock_recorded else np.zeros_like(self.elapsed_s)
        for i in range(len(self.steps)):
            yield (
                int(self.steps[i]),
                int(self.grad_evals[i]),
                float(elapsed[i]),
                self.thetas[i],
            )

    def header(self) -> str:
        cols = ["step", "grad_evals", "elapsed_s"]
        cols += [f"theta_{j + 1}" for j in range(self.d_theta)]
        return ",".join(cols)


class PathRecorder:
    """Thinned path storage: fixed stride, or adaptive doubling capped at
    ``max_samples`` (evenly strided, deterministic in the step count)."""

    def __init__(self, stride: int | None, max_samples: int):
        self.adaptive = stride is None
        self.stride = 1 if stride is None else int(stride)
        self.max_samples = int(max_samples)
        self.steps: list[int] = []
        self.grad_evals: list[int] = []
        self.elapsed: list[float] = []
        self.thetas: list[np.ndarray] = []

    def record(self, step: int, grads: int, elapsed: float, theta: np.ndarray):
        if step % self.stride:
            return
        self.steps.append(step)
        self.grad_evals.append(grads)
        self.elapsed.append(elapsed)
        self.thetas.append(theta.copy())
        if self.adaptive and len(self.steps) > self.max_samples:
            self.stride *= 2
            keep = [i for i, s in enumerate(self.steps) if s % self.stride == 0]
            self.steps = [self.steps[i] for i in keep]
            self.grad_evals = [self.grad_evals[i] for i in keep]
            self.elapsed = [self.elapsed[i] for i in keep]
            self.thetas = [self.thetas[i] for i in keep]

    def arrays(self):
        return (
            np.asarray(self.steps, dtype=np.int64),
            np.asarray(self.grad_evals, dtype=np.int64),
            np.asarray(self.elapsed, dtype=float),
            np.asarray(self.thetas, dtype=float),
        )


def _fmt(v: float) -> str:
    return repr(float(v))


def write_trajectory_csv(record: RunRecord, path) -> None:
    lines = [f"# config={json.dumps(record.config, sort_keys=True)}"]
    lines.append(record.header())
    for step, grads, elapsed, theta in record.csv_rows():
        theta_cols = ",".join(_fmt(t) for t in theta)
        lines.append(f"{step},{grads},{_fmt(elapsed)},{theta_cols}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def summary_dict(record: RunRecord, theta_star=None) -> dict:
    abs_error = None
    star = None
    if theta_star is not None:
        star = [float(t) for t in np.atleast_1d(theta_star)]
        abs_error = float(np.linalg.norm(record.theta_final - np.atleast_1d(theta_star)))
    return {
        "algorithm": record.algorithm,
        "config": record.config,
        "theta_final": [float(t) for t in record.theta_final],
        "theta_star": star,
        "abs_error": abs_error,
        "total_grad_evals": int(record.total_grad_evals),
        "total_steps": int(record.total_steps),
        "wall_seconds": float(record.wall_seconds),
    }


def write_summary_json(record: RunRecord, path, theta_star=None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary_dict(record, theta_star), fh, indent=2, sort_keys=True)
        fh.write("\n")
