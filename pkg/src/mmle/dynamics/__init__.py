from .config import Budget, SdeConfig
from .integrators import (
    RUNNERS,
    averaged_ula_run,
    ipla_run,
    pgd_run,
    sfla_run,
    soul_run,
    step_budget_loop,
)
from .record import RunRecord, summary_dict, write_summary_json, write_trajectory_csv
from .streams import NoiseStreams, replica_seed

__all__ = [
    "Budget",
    "SdeConfig",
    "RUNNERS",
    "averaged_ula_run",
    "ipla_run",
    "pgd_run",
    "sfla_run",
    "soul_run",
    "step_budget_loop",
    "RunRecord",
    "summary_dict",
    "write_summary_json",
    "write_trajectory_csv",
    "NoiseStreams",
    "replica_seed",
]
