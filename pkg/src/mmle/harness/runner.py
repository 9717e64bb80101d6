"""Experiment execution: single runs, aligned comparisons, studies, datasets."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..analysis import (
    averaging_scaling_study,
    bias_decay_study,
    concentration_study,
    em_ascent_study,
    run_all_probes,
)
from ..dynamics import RUNNERS, summary_dict, write_summary_json, write_trajectory_csv
from ..dynamics.config import Budget, SdeConfig
from ..errors import ConfigurationError
from ..models import LogisticRegressionModel
from .config import (
    ExperimentConfig,
    build_algorithm,
    build_model,
    coupled_config,
    validate_experiment,
)


def _theta_star(model):
    return model.mmle() if hasattr(model, "mmle") else None


def _ensure_valid(cfg: ExperimentConfig):
    problems = validate_experiment(cfg)
    if problems:
        raise ConfigurationError("; ".join(problems))


def run_single(cfg: ExperimentConfig, out_dir) -> dict:
    """Execute one algorithm run; writes trajectory CSV and summary JSON."""
    _ensure_valid(cfg)
    model = build_model(cfg)
    name, sde = build_algorithm(cfg, model_hint=model)
    record = RUNNERS[name](model, sde)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{name}_trajectory.csv"
    json_path = out_dir / f"{name}_summary.json"
    write_trajectory_csv(record, csv_path)
    write_summary_json(record, json_path, theta_star=_theta_star(model))
    return {"trajectory": csv_path, "summary": json_path}


@dataclass
class ComparisonSuite:
    """Algorithms sharing one model and one budget, for overlay plots."""

    model: object
    entries: list  # (algorithm name, SdeConfig)
    budget: Budget

    def __post_init__(self):
        if len(self.entries) < 2:
            raise ConfigurationError("comparison needs at least 2 algorithms")
        for _, sde in self.entries:
            if sde.budget != self.budget:
                raise ConfigurationError("all comparison entries must share the budget")


def build_comparison(cfg: ExperimentConfig) -> ComparisonSuite:
    _ensure_valid(cfg)
    section = cfg.compare or {}
    model = build_model(cfg)
    budget = Budget(
        max_steps=section.get("max_steps"),
        max_seconds=section.get("max_seconds"),
        max_grad_evals=section.get("max_grad_evals"),
    )
    theta0 = np.asarray(section.get("theta0", [0.0]), dtype=float)
    x0 = section.get("x0", [0.0])
    if len(x0) == 1 and model.d_x > 1:
        x0 = x0 * model.d_x
    entries = []
    for name in section.get("algorithms", []):
        sde = coupled_config(
            name,
            gamma=section.get("gamma", 0.01),
            n_inner=section.get("n_inner", 100),
            beta=section.get("beta", 1e4),
            seed=section.get("seed", 0),
            theta0=theta0,
            x0=np.asarray(x0, dtype=float),
            budget=budget,
            thin_stride=section.get("thin_stride"),
            max_path_samples=section.get("max_path_samples", 10_000),
        )
        entries.append((name, sde))
    return ComparisonSuite(model=model, entries=entries, budget=budget)


def run_comparison(suite: ComparisonSuite, out_dir) -> dict:
    """Run every suite entry; emits one long-format CSV plus a JSON table."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    theta_star = _theta_star(suite.model)
    records = []
    for name, sde in suite.entries:
        records.append(RUNNERS[name](suite.model, sde))

    meta = {
        "budget": records[0].config["budget"],
        "entries": [r.config for r in records],
        "theta_star": None if theta_star is None else [float(t) for t in theta_star],
    }
    d_theta = records[0].d_theta
    lines = [f"# config={json.dumps(meta, sort_keys=True)}"]
    header = "algorithm,step,grad_evals,elapsed_s," + ",".join(
        f"theta_{j + 1}" for j in range(d_theta)
    )
    lines.append(header)
    for record in records:
        for step, grads, elapsed, theta in record.csv_rows():
            theta_cols = ",".join(repr(float(t)) for t in theta)
            lines.append(f"{record.algorithm},{step},{grads},{repr(elapsed)},{theta_cols}")
    csv_path = out_dir / "comparison.csv"
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    table = {r.algorithm: summary_dict(r, theta_star) for r in records}
    json_path = out_dir / "comparison.json"
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(table, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"comparison": csv_path, "table": json_path}


def run_study(cfg: ExperimentConfig, out_dir) -> dict:
    """Dispatch the [study] section to the matching analysis operation."""
    _ensure_valid(cfg)
    section = cfg.study or {}
    name = section.get("name")
    model = build_model(cfg)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{name}_report.json"
    csv_path = out_dir / f"{name}_points.csv"
    seed = section.get("seed", 0)

    if name == "averaging_scaling":
        report = averaging_scaling_study(
            model,
            section.get("values", [0.2, 0.1, 0.05, 0.025]),
            section.get("beta", 1e2),
            n_replicas=section.get("replicas", 0),
            t_end=section.get("t_end", 200.0),
            delta=section.get("delta", 1e-3),
            seed=seed,
            workers=section.get("workers"),
        )
    elif name == "concentration":
        report = concentration_study(
            model,
            section.get("values", [1e2, 1e3, 1e4]),
            n_replicas=section.get("replicas", 500),
            t_end=section.get("t_end"),
            delta=section.get("delta"),
            theta0=section.get("theta0", 0.0),
            seed=seed,
            workers=section.get("workers"),
        )
    elif name == "bias_decay":
        report = bias_decay_study(
            model,
            section.get("values", [4e-3, 2e-3, 1e-3]),
            epsilon=section.get("epsilon", 0.1),
            beta=section.get("beta", 1e3),
            t_end=section.get("t_end", 250.0),
            n_replicas=section.get("replicas", 16),
            seed=seed,
            workers=section.get("workers"),
        )
    elif name == "em_ascent":
        path = em_ascent_study(model, section.get("theta0", 0.0), section.get("k_max", 50))
        logps = [lp for _, lp in path]
        payload = {
            "theta0": section.get("theta0", 0.0),
            "k_max": section.get("k_max", 50),
            "thetas": [t for t, _ in path],
            "log_marginals": logps,
            "monotone": bool(all(b >= a for a, b in zip(logps, logps[1:]))),
            "theta_star": float(model.mmle()[0]),
        }
        with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        lines = ["k,theta,log_marginal"]
        lines += [f"{k},{t!r},{lp!r}" for k, (t, lp) in enumerate(path)]
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        return {"report": json_path, "points": csv_path}
    elif name == "probes":
        reports = run_all_probes(
            model,
            n_samples=section.get("n_samples", 10_000),
            radius=section.get("radius", 5.0),
            seed=seed,
        )
        with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2, sort_keys=True)
            fh.write("\n")
        lines = ["probe,parameter,passed,worst_violation"]
        lines += [
            f"{r.name},{r.parameter!r},{int(r.passed)},{r.worst_violation!r}"
            for r in reports
        ]
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        return {"report": json_path, "points": csv_path}
    else:
        raise ConfigurationError(f"[study] name: unknown study {name!r}")

    report.write_json(json_path)
    report.write_points_csv(csv_path)
    return {"report": json_path, "points": csv_path}


def export_dataset(cfg: ExperimentConfig, path) -> Path:
    """Write the configured logistic dataset as CSV (label,v_1..v_dx)."""
    _ensure_valid(cfg)
    if cfg.model.get("name") != "logistic":
        raise ConfigurationError("export-data requires a logistic model")
    model = build_model(cfg)
    path = Path(path)
    meta = {"sigma": model.sigma, "d_x": model.d_x, "d_y": model.d_y}
    lines = [f"# config={json.dumps(meta, sort_keys=True)}"]
    lines.append("label," + ",".join(f"v_{j + 1}" for j in range(model.d_x)))
    for i in range(model.d_y):
        row = ",".join(repr(float(v)) for v in model.covariates[i])
        lines.append(f"{int(model.labels[i])},{row}")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def import_dataset(path) -> LogisticRegressionModel:
    """Read a dataset CSV written by :func:`export_dataset`."""
    path = Path(path)
    meta = None
    rows = []
    header = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                if "config=" in line:
                    meta = json.loads(line.split("config=", 1)[1])
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append(line.split(","))
    if meta is None or header is None:
        raise ConfigurationError(f"{path}: missing config line or header")
    expected = ["label"] + [f"v_{j + 1}" for j in range(int(meta["d_x"]))]
    for got, want in zip(header, expected):
        if got != want:
            raise ConfigurationError(
                f"{path}: header column {got!r} does not match expected {want!r}"
            )
    if len(header) != len(expected):
        raise ConfigurationError(
            f"{path}: expected {len(expected)} columns, found {len(header)}"
        )
    labels = np.array([float(r[0]) for r in rows])
    covariates = np.array([[float(v) for v in r[1:]] for r in rows])
    return LogisticRegressionModel(labels, covariates, meta["sigma"])
