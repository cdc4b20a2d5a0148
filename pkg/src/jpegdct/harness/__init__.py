"""Experiment harness: configuration, runner, reports, CLI."""

from .config import (
    ConfigInvalid,
    ExperimentConfig,
    load_config,
    parse_config_text,
    validate,
    write_resolved,
)
from .report import (
    CellResult,
    RunReport,
    csv_text,
    emit_report,
    operation_label,
    parse_csv_text,
    text_table,
)
from .run import (
    EmptyCorpus,
    benchmark_decode,
    environment_note,
    prepare_corpora,
    run_cell,
    run_experiment,
)

__all__ = [
    "CellResult",
    "ConfigInvalid",
    "EmptyCorpus",
    "ExperimentConfig",
    "RunReport",
    "benchmark_decode",
    "csv_text",
    "emit_report",
    "environment_note",
    "load_config",
    "operation_label",
    "parse_config_text",
    "parse_csv_text",
    "prepare_corpora",
    "run_cell",
    "run_experiment",
    "text_table",
    "validate",
    "write_resolved",
]
