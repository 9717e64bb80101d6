from .config import (
    ExperimentConfig,
    build_algorithm,
    build_model,
    coupled_config,
    load_config,
    validate_experiment,
)
from .runner import (
    ComparisonSuite,
    build_comparison,
    export_dataset,
    import_dataset,
    run_comparison,
    run_single,
    run_study,
)

__all__ = [
    "ExperimentConfig",
    "build_algorithm",
    "build_model",
    "coupled_config",
    "load_config",
    "validate_experiment",
    "ComparisonSuite",
    "build_comparison",
    "export_dataset",
    "import_dataset",
    "run_comparison",
    "run_single",
    "run_study",
]
