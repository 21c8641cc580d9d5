"""Per-point error tables and their per-region summaries."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from viscogp.continuum.tensors import VOIGT_LABELS, SymTensor3
from viscogp.core.config import ModelDocument
from viscogp.core.paths import atomic_write_text
from viscogp.harness.generation import Sample
from viscogp.harness.metrics import err, mean_err
from viscogp.surrogate.models import dissipation

logger = logging.getLogger(__name__)

REGIONS = ("training", "same_mode", "cross_mode")
FLOAT_FORMAT = "%.17g"

TRUTH_COLUMNS = [f"truth_{label}" for label in VOIGT_LABELS]
PRED_COLUMNS = [f"pred_{label}" for label in VOIGT_LABELS]
POINT_COLUMNS = (
    ["grid", "mode", "strain", "rate", "region"]
    + TRUTH_COLUMNS
    + PRED_COLUMNS
    + ["err", "excluded"]
)


class RegionSummary(BaseModel):
    """Error statistics of one model over one region."""

    n_points: int = 0
    n_excluded: int = 0
    mean_err: Optional[float] = None
    max_err: Optional[float] = None


class ModelSummary(BaseModel):
    """Summary of one evaluated model."""

    name: str
    kind: str
    regions: Dict[str, RegionSummary] = Field(default_factory=dict)
    parameters: Dict[str, float] = Field(default_factory=dict)
    zero_shear: Optional[bool] = None
    min_dissipation: Dict[str, float] = Field(default_factory=dict)


class ReportSummary(BaseModel):
    """Run-level summary written as ``summary.json``."""

    experiment_id: str
    seed: int = 0
    ground_truth: Optional[ModelDocument] = None
    dataset_hash: str = ""
    n_train: int = 0
    exclusion_threshold: float
    models: Dict[str, ModelSummary] = Field(default_factory=dict)
    # Smallest standardized dissipation constraint value of the viscous surrogate.
    constraint_min_dissipation: Optional[float] = None


def point_table(
    samples: Sequence[Sample],
    predictions: Sequence[SymTensor3],
    exclusion_threshold: float,
    rate_dependent: bool = False,
) -> pd.DataFrame:
    """One row per evaluated point: coordinates, truth, prediction and err.

    Points whose truth norm is below ``exclusion_threshold`` are flagged as
    excluded and carry no err.
    """
    rows = []
    for sample, pred in zip(samples, predictions):
        excluded = sample.truth.norm() < exclusion_threshold
        value = None if excluded else err(pred, sample.truth)
        row = {
            "grid": sample.point.grid,
            "mode": sample.point.mode.value if sample.point.mode else "record",
            "strain": sample.point.strain,
            "rate": sample.point.rate,
            "region": sample.point.region,
        }
        row.update(zip(TRUTH_COLUMNS, sample.truth.to_list()))
        row.update(zip(PRED_COLUMNS, pred.to_list()))
        row["err"] = np.nan if value is None else value
        row["excluded"] = value is None
        if rate_dependent:
            row["truth_dissipation"] = dissipation(sample.truth, sample.state.Cdot)
            row["pred_dissipation"] = dissipation(pred, sample.state.Cdot)
        rows.append(row)
    if not rows:
        return pd.DataFrame(columns=POINT_COLUMNS)
    return pd.DataFrame(rows)


def summarize_regions(table: pd.DataFrame) -> Dict[str, RegionSummary]:
    """Summaries for every region; regions without points have no mean."""
    summaries = {}
    for region in REGIONS:
        subset = table[table["region"] == region]
        errors = [float(e) for e in subset["err"].dropna()]
        summaries[region] = RegionSummary(
            n_points=int(len(subset)),
            n_excluded=int(subset["excluded"].astype(bool).sum()),
            mean_err=mean_err(errors),
            max_err=float(max(errors)) if errors else None,
        )
    return summaries


@dataclass
class ErrorReport:
    """Summary plus one per-point table per evaluated model."""

    summary: ReportSummary
    tables: Dict[str, pd.DataFrame]

    def mean_err(self, model: str, region: str) -> Optional[float]:
        return self.summary.models[model].regions[region].mean_err

    def region_table(self, model: str, region: str) -> pd.DataFrame:
        table = self.tables[model]
        return table[table["region"] == region].reset_index(drop=True)

    def write(self, output_dir: Path) -> List[Path]:
        """Write ``<model>_<region>.csv`` files and ``summary.json`` atomically."""
        output_dir = Path(output_dir)
        written = []
        for name in self.tables:
            for region in REGIONS:
                path = output_dir / f"{name}_{region}.csv"
                table = self.region_table(name, region)
                written.append(
                    atomic_write_text(path, table.to_csv(index=False, float_format=FLOAT_FORMAT))
                )
        summary_path = output_dir / "summary.json"
        summary = json.dumps(self.summary.model_dump(mode="json"), indent=2)
        written.append(atomic_write_text(summary_path, summary))
        logger.info(f"Wrote report ({len(written)} files) to {output_dir}")
        return written
