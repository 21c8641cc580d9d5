"""Experiment harness: data generation, error metrics, reports, sweeps and file IO."""

from viscogp.harness.experiment import (
    evaluate_records,
    run_experiment,
    size_sweep,
    spec_for_size,
    train_models,
)
from viscogp.harness.generation import (
    GridPoint,
    Sample,
    generate_dataset,
    grid_points,
    record_samples,
    sample_grids,
)
from viscogp.harness.io import (
    DATASET_COLUMNS,
    load_model,
    read_dataset,
    read_records,
    read_states,
    save_model,
    write_dataset,
    write_records,
)
from viscogp.harness.metrics import err, mean_err
from viscogp.harness.report import REGIONS, ErrorReport, ModelSummary, RegionSummary

__all__ = [
    "GridPoint",
    "Sample",
    "grid_points",
    "sample_grids",
    "record_samples",
    "generate_dataset",
    "err",
    "mean_err",
    "REGIONS",
    "ErrorReport",
    "ModelSummary",
    "RegionSummary",
    "run_experiment",
    "evaluate_records",
    "size_sweep",
    "spec_for_size",
    "train_models",
    "DATASET_COLUMNS",
    "read_dataset",
    "read_records",
    "read_states",
    "write_dataset",
    "write_records",
    "save_model",
    "load_model",
]
