"""Python bindings for the strata-bench sampling and evaluation core."""

from ._core import (
    CapacityError,
    Dataset,
    FormatError,
    InsufficientDataError,
    SchemaError,
    SpecError,
    StrataError,
    allocate_balanced,
    allocate_proportional,
    dataset_from_csv,
    format_percent,
    information_gain,
    mix,
    parse_records,
    read_dataset,
    recode_survival_months,
    run_cell,
    run_cli,
    run_grid,
    sample,
    synthesize,
    train_and_predict,
    write_dataset,
)

__all__ = [
    "CapacityError",
    "Dataset",
    "FormatError",
    "InsufficientDataError",
    "SchemaError",
    "SpecError",
    "StrataError",
    "allocate_balanced",
    "allocate_proportional",
    "dataset_from_csv",
    "format_percent",
    "information_gain",
    "mix",
    "parse_records",
    "read_dataset",
    "recode_survival_months",
    "run_cell",
    "run_cli",
    "run_grid",
    "sample",
    "synthesize",
    "train_and_predict",
    "write_dataset",
]
