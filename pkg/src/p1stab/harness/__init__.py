"""Configuration, orchestration and reporting for the command line."""

from .config import DEFAULT_TOLERANCES, ExperimentConfig, load_config, run_manifest
from .reporting import (
    write_json,
    write_metric_snapshot,
    write_plot_data,
    write_trace_csv,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "ExperimentConfig",
    "load_config",
    "run_manifest",
    "write_json",
    "write_metric_snapshot",
    "write_plot_data",
    "write_trace_csv",
]
