"""Command-line entry point: run, compare, study, validate, export-data."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ..errors import ConfigurationError, DivergenceError, UnsupportedOracleError
from .config import load_config, validate_experiment
from .runner import (
    build_comparison,
    export_dataset,
    run_comparison,
    run_single,
    run_study,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_ORACLE = 4

_OVERRIDE_FLAGS = {
    "epsilon": "epsilon",
    "beta": "beta",
    "delta": "delta",
    "gamma": "gamma",
    "n": "n_inner",
    "seed": "seed",
}
_BUDGET_FLAGS = {"steps": "max_steps", "seconds": "max_seconds",
                 "grad_evals": "max_grad_evals"}


def _add_overrides(parser):
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--steps", type=int)
    parser.add_argument("--seconds", type=float)
    parser.add_argument("--grad-evals", dest="grad_evals", type=int)


def _apply_overrides(section: dict | None, args) -> None:
    if section is None:
        return
    for flag, key in _OVERRIDE_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            section[key] = value
    budget = {k: getattr(args, flag, None) for flag, k in _BUDGET_FLAGS.items()}
    if any(v is not None for v in budget.values()):
        for k in _BUDGET_FLAGS.values():
            section.pop(k, None)
        for k, v in budget.items():
            if v is not None:
                section[k] = v


def _out_dir(args, cfg) -> Path:
    if args.out:
        return Path(args.out)
    if cfg.output.get("directory"):
        return Path(cfg.output["directory"])
    return Path(os.environ.get("MMLE_OUT_DIR", "out"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmle",
        description="Langevin-based maximum marginal likelihood estimation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one algorithm run")
    p_run.add_argument("config")
    p_run.add_argument("--out")
    _add_overrides(p_run)

    p_cmp = sub.add_parser("compare", help="run several algorithms under one budget")
    p_cmp.add_argument("config")
    p_cmp.add_argument("--out")
    _add_overrides(p_cmp)

    p_study = sub.add_parser("study", help="run a scaling/probe study")
    p_study.add_argument("config")
    p_study.add_argument("--out")
    p_study.add_argument("--seed", type=int)

    p_val = sub.add_parser("validate", help="validate a config without executing")
    p_val.add_argument("config")

    p_exp = sub.add_parser("export-data", help="export the logistic dataset as CSV")
    p_exp.add_argument("config")
    p_exp.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            problems = validate_experiment(cfg)
            for problem in problems:
                print(problem, file=sys.stderr)
            return EXIT_CONFIG if problems else EXIT_OK
        if args.command == "run":
            _apply_overrides(cfg.algorithm, args)
            paths = run_single(cfg, _out_dir(args, cfg))
        elif args.command == "compare":
            _apply_overrides(cfg.compare, args)
            suite = build_comparison(cfg)
            paths = run_comparison(suite, _out_dir(args, cfg))
        elif args.command == "study":
            if cfg.study is not None and args.seed is not None:
                cfg.study["seed"] = args.seed
            paths = run_study(cfg, _out_dir(args, cfg))
        elif args.command == "export-data":
            paths = {"dataset": export_dataset(cfg, args.out)}
        else:  # pragma: no cover
            return EXIT_CONFIG
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except UnsupportedOracleError as exc:
        print(f"unsupported oracle: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for label, path in paths.items():
        print(f"{label}: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
