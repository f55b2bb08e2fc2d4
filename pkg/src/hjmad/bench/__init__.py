"""Benchmark harness: settings, seeded experiments, trace files and the CLI."""

from .config import PROFILES, load_config_file, resolve_settings
from .experiment import PUBLISHED_EVALS, ExperimentSpec, SummaryRow, run_experiment
from .traceio import read_trace_csv, write_trace_csv

__all__ = [
    "PROFILES",
    "PUBLISHED_EVALS",
    "ExperimentSpec",
    "SummaryRow",
    "load_config_file",
    "read_trace_csv",
    "resolve_settings",
    "run_experiment",
    "write_trace_csv",
]
