"""Experiment harness: configuration, sweeps, persistence, plots and the CLI."""

from .config import ConfigError, ExperimentConfig, GridPolicy, load_config
from .rows import ResultRow, read_csv, read_jsonl, write_csv, write_jsonl
from .sweep import run_config

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "GridPolicy",
    "ResultRow",
    "load_config",
    "read_csv",
    "read_jsonl",
    "run_config",
    "write_csv",
    "write_jsonl",
]
