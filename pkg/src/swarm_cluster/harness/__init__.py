"""Experiment harness: configuration, seeded runs, reports and traces."""

from .config import (
    ALGORITHMS,
    ConfigError,
    DatasetSpec,
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    parse_config,
    serialize_config,
)
from .report import REPORT_COLUMNS, ReportRow, read_trace, write_report, write_trace
from .runner import compare_table, load_dataset, medians, run_experiment, run_one

__all__ = [
    "ALGORITHMS",
    "REPORT_COLUMNS",
    "ConfigError",
    "DatasetSpec",
    "ExperimentConfig",
    "ReportRow",
    "compare_table",
    "config_from_dict",
    "config_to_dict",
    "load_dataset",
    "medians",
    "parse_config",
    "read_trace",
    "run_experiment",
    "run_one",
    "serialize_config",
    "write_report",
    "write_trace",
]
