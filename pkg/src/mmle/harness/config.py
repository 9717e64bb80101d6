"""Experiment configuration: INI-style or JSON files, validated field by field."""
from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..dynamics import Budget, SdeConfig
from ..errors import ConfigurationError
from ..models import (
    ExamplePotential,
    GaussianHierarchicalModel,
    LogisticRegressionModel,
    generate_logistic_data,
)


def _float(s):
    v = float(s)
    return math.inf if s in ("inf", "Infinity") else v


def _floats(s):
    if isinstance(s, (list, tuple)):
        return [float(v) for v in s]
    return [float(tok) for tok in str(s).split(",") if tok.strip()]


def _int(s):
    return int(float(s)) if not isinstance(s, bool) else int(s)


def _bool(s):
    if isinstance(s, bool):
        return s
    if str(s).lower() in ("1", "true", "yes", "on"):
        return True
    if str(s).lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _str(s):
    return str(s)


def _strs(s):
    if isinstance(s, (list, tuple)):
        return [str(v) for v in s]
    return [tok.strip() for tok in str(s).split(",") if tok.strip()]


_SCHEMAS = {
    "model": {
        "name": _str, "d_x": _int, "d_y": _int, "sigma_x": _float,
        "sigma_y": _float, "sigma": _float, "y": _floats, "theta_true": _float,
        "data_seed": _int, "data_path": _str, "a": _float, "a_tilde": _float,
        "d": _int, "c_b": _float, "c_g": _float, "c_h": _float,
    },
    "algorithm": {
        "name": _str, "epsilon": _float, "beta": _float, "delta": _float,
        "gamma": _float, "n_inner": _int, "seed": _int, "theta0": _floats,
        "x0": _floats, "max_steps": _int, "max_seconds": _float,
        "max_grad_evals": _int, "thin_stride": _int, "max_path_samples": _int,
        "record_wall_clock": _bool,
    },
    "compare": {
        "algorithms": _strs, "gamma": _float, "n_inner": _int, "beta": _float,
        "seed": _int, "theta0": _floats, "x0": _floats, "max_steps": _int,
        "max_seconds": _float, "max_grad_evals": _int, "thin_stride": _int,
        "max_path_samples": _int,
    },
    "study": {
        "name": _str, "values": _floats, "replicas": _int, "beta": _float,
        "epsilon": _float, "t_end": _float, "delta": _float, "theta0": _float,
        "k_max": _int, "n_samples": _int, "radius": _float, "seed": _int,
        "workers": _int,
    },
    "output": {"directory": _str, "stride": _int, "formats": _strs},
}

_ALGORITHMS = ("sfla", "soul", "pgd", "ipla", "averaged_ula")
_STUDIES = ("averaging_scaling", "concentration", "em_ascent", "bias_decay", "probes")
_MODELS = ("gaussian", "logistic", "example_separable", "example_shift")


@dataclass
class ExperimentConfig:
    """Parsed sections of one experiment file."""

    model: dict = field(default_factory=dict)
    algorithm: dict | None = None
    compare: dict | None = None
    study: dict | None = None
    output: dict = field(default_factory=dict)
    source: str = "<memory>"

    def sections(self):
        out = {"model": self.model, "output": self.output}
        if self.algorithm is not None:
            out["algorithm"] = self.algorithm
        if self.compare is not None:
            out["compare"] = self.compare
        if self.study is not None:
            out["study"] = self.study
        return out


def _convert_sections(raw: dict, source: str) -> ExperimentConfig:
    diagnostics = []
    converted = {}
    for sec_name, entries in raw.items():
        schema = _SCHEMAS.get(sec_name)
        if schema is None:
            diagnostics.append(f"[{sec_name}]: unknown section")
            continue
        out = {}
        for key, value in entries.items():
            caster = schema.get(key)
            if caster is None:
                diagnostics.append(f"[{sec_name}] {key}: unknown field")
                continue
            try:
                out[key] = caster(value)
            except (TypeError, ValueError) as exc:
                diagnostics.append(f"[{sec_name}] {key}: {exc}")
        converted[sec_name] = out
    if diagnostics:
        raise ConfigurationError("; ".join(diagnostics))
    return ExperimentConfig(
        model=converted.get("model", {}),
        algorithm=converted.get("algorithm"),
        compare=converted.get("compare"),
        study=converted.get("study"),
        output=converted.get("output", {}),
        source=source,
    )


def load_config(path) -> ExperimentConfig:
    """Parse an INI-style or JSON experiment file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(raw, dict) or not all(isinstance(v, dict) for v in raw.values()):
            raise ConfigurationError(f"{path}: JSON config must map sections to objects")
        return _convert_sections(raw, str(path))
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    raw = {sec: dict(parser.items(sec)) for sec in parser.sections()}
    return _convert_sections(raw, str(path))


def validate_experiment(cfg: ExperimentConfig) -> list[str]:
    """Full no-execution validation; returns every violation found."""
    out = []
    model = cfg.model
    name = model.get("name")
    if name is None:
        out.append("[model] name: required")
    elif name not in _MODELS:
        out.append(f"[model] name: unknown model {name!r} (expected one of {_MODELS})")
    elif name == "gaussian":
        if "y" not in model and not {"d_x", "theta_true", "data_seed"} <= model.keys():
            out.append("[model]: gaussian needs either y or (d_x, theta_true, data_seed)")
        for key in ("sigma_x", "sigma_y"):
            if model.get(key, 1.0) <= 0:
                out.append(f"[model] {key}: must be > 0")
    elif name == "logistic":
        if "data_path" not in model and not {"d_x", "d_y", "theta_true", "data_seed"} <= model.keys():
            out.append("[model]: logistic needs data_path or (d_x, d_y, theta_true, data_seed)")
        if "data_path" not in model and model.get("sigma", 1.0) <= 0:
            out.append("[model] sigma: must be > 0")
    else:
        for key in ("a", "a_tilde", "d"):
            if key not in model:
                out.append(f"[model] {key}: required for example potentials")

    active = [s for s in ("algorithm", "compare", "study") if getattr(cfg, s) is not None]
    if not active:
        out.append("config needs one of [algorithm], [compare], [study]")

    if cfg.algorithm is not None:
        alg = cfg.algorithm
        if alg.get("name") not in _ALGORITHMS:
            out.append(f"[algorithm] name: expected one of {_ALGORITHMS}")
        try:
            _, sde = build_algorithm(cfg, model_hint=None)
            out.extend(f"[algorithm] {d}" for d in sde.diagnostics())
        except ConfigurationError as exc:
            out.append(f"[algorithm] {exc}")

    if cfg.compare is not None:
        cmp_sec = cfg.compare
        algos = cmp_sec.get("algorithms", [])
        if len(algos) < 2:
            out.append("[compare] algorithms: need at least 2")
        for a in algos:
            if a not in _ALGORITHMS:
                out.append(f"[compare] algorithms: unknown {a!r}")
        if cmp_sec.get("gamma", 1.0) <= 0:
            out.append("[compare] gamma: must be > 0")
        if cmp_sec.get("n_inner", 1) < 1:
            out.append("[compare] n_inner: must be >= 1")
        budget = Budget(
            max_steps=cmp_sec.get("max_steps"),
            max_seconds=cmp_sec.get("max_seconds"),
            max_grad_evals=cmp_sec.get("max_grad_evals"),
        )
        out.extend(f"[compare] {d}" for d in budget.diagnostics())

    if cfg.study is not None:
        study = cfg.study
        if study.get("name") not in _STUDIES:
            out.append(f"[study] name: expected one of {_STUDIES}")
        values = study.get("values", [])
        if values and (any(v <= 0 for v in values) or len(set(values)) != len(values)):
            out.append("[study] values: must be strictly positive and distinct")
    return out


def build_model(cfg: ExperimentConfig):
    model = cfg.model
    name = model.get("name")
    if name == "gaussian":
        sigma_x = model.get("sigma_x", 1.0)
        sigma_y = model.get("sigma_y", 1.0)
        if "y" in model:
            return GaussianHierarchicalModel(model["y"], sigma_x, sigma_y)
        return GaussianHierarchicalModel.synthetic(
            model["d_x"], model["theta_true"], sigma_x, sigma_y, model["data_seed"]
        )
    if name == "logistic":
        if "data_path" in model:
            from .runner import import_dataset

            return import_dataset(model["data_path"])
        return generate_logistic_data(
            model["d_x"], model["d_y"], model["theta_true"],
            model.get("sigma", 1.0), model["data_seed"],
        )
    if name == "example_separable":
        return ExamplePotential.separable_cos(
            model["a"], model["a_tilde"], model["d"],
            model.get("c_b", 0.5), model.get("c_g", 0.5),
        )
    if name == "example_shift":
        return ExamplePotential.shift_cos(
            model["a"], model["a_tilde"], model["d"], model.get("c_h", 1.0)
        )
    raise ConfigurationError(f"[model] name: unknown model {name!r}")


def _make_budget(section: dict) -> Budget:
    return Budget(
        max_steps=section.get("max_steps"),
        max_seconds=section.get("max_seconds"),
        max_grad_evals=section.get("max_grad_evals"),
    )


def _init_vectors(section: dict, d_theta: int, d_x: int):
    theta0 = section.get("theta0", [0.0])
    if len(theta0) == 1 and d_theta > 1:
        theta0 = theta0 * d_theta
    x0 = section.get("x0", [0.0])
    if len(x0) == 1 and d_x > 1:
        x0 = x0 * d_x
    return np.asarray(theta0, dtype=float), np.asarray(x0, dtype=float)


def build_algorithm(cfg: ExperimentConfig, model_hint=None):
    """(algorithm name, SdeConfig) from the [algorithm] section."""
    section = cfg.algorithm or {}
    name = section.get("name")
    if name not in _ALGORITHMS:
        raise ConfigurationError(f"[algorithm] name: expected one of {_ALGORITHMS}")
    model = model_hint if model_hint is not None else build_model(cfg)
    theta0, x0 = _init_vectors(section, model.d_theta, model.d_x)
    sde = SdeConfig(
        seed=section.get("seed", 0),
        theta0=theta0,
        x0=x0,
        budget=_make_budget(section),
        epsilon=section.get("epsilon"),
        beta=section.get("beta"),
        delta=section.get("delta"),
        gamma=section.get("gamma"),
        n_inner=section.get("n_inner"),
        thin_stride=section.get("thin_stride"),
        max_path_samples=section.get("max_path_samples", 10_000),
        record_wall_clock=section.get("record_wall_clock", False),
    )
    problems = sde.diagnostics()
    if problems:
        raise ConfigurationError("; ".join(problems))
    return name, sde


def coupled_config(algorithm: str, *, gamma: float, n_inner: int, beta: float,
                   seed: int, theta0, x0, budget: Budget,
                   thin_stride=None, max_path_samples: int = 10_000) -> SdeConfig:
    """Comparison coupling: SOUL uses delta = gamma with M = M_tilde = N,
    SFLA uses epsilon = 1/N and delta = gamma/N, the particle methods use
    (gamma, N) directly, and the averaged reference uses delta = gamma/N."""
    common = dict(
        seed=seed, theta0=np.atleast_1d(theta0), x0=np.asarray(x0, dtype=float),
        budget=budget, thin_stride=thin_stride, max_path_samples=max_path_samples,
    )
    if algorithm == "sfla":
        return SdeConfig(beta=beta, delta=gamma / n_inner, epsilon=1.0 / n_inner, **common)
    if algorithm == "soul":
        return SdeConfig(delta=gamma, gamma=gamma, n_inner=n_inner, **common)
    if algorithm in ("pgd", "ipla"):
        return SdeConfig(gamma=gamma, n_inner=n_inner, **common)
    if algorithm == "averaged_ula":
        return SdeConfig(beta=beta, delta=gamma / n_inner, **common)
    raise ConfigurationError(f"unknown algorithm {algorithm!r}")
