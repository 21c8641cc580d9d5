"""Experiment runs: train the surrogate and baselines, evaluate them by region, report."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from viscogp.analytic.calibration import calibrate
from viscogp.analytic.coefficients import Branch
from viscogp.analytic.models import ConstitutiveModel
from viscogp.continuum.kinematics import DeformationState
from viscogp.continuum.modes import DeformationMode
from viscogp.continuum.tensors import SymTensor3
from viscogp.core.config import ExperimentSpec
from viscogp.core.errors import ExperimentError, ViscoGPError
from viscogp.core.paths import atomic_write_text, resolve_output_dir
from viscogp.gpr.constraints import constraint_values
from viscogp.harness.generation import (
    Sample,
    record_samples,
    sample_grids,
    state_key,
    to_dataset,
)
from viscogp.harness.io import save_model, write_dataset
from viscogp.harness.report import (
    REGIONS,
    ErrorReport,
    ModelSummary,
    ReportSummary,
    point_table,
    summarize_regions,
)
from viscogp.surrogate.dataset import BranchDataset, build_star_dataset, records_hash
from viscogp.surrogate.models import (
    ClassicalModel,
    SurrogateModel,
    dissipation_constraints,
    predict_stress,
    train_classical,
    train_surrogate,
)

logger = logging.getLogger(__name__)

SURROGATE = "surrogate"
CLASSICAL = "classical"
CONVENTIONAL = "conventional"

# Points whose truth norm is below this fraction of the largest truth norm are excluded.
EXCLUSION_FRACTION = 1e-6

SWEEP_RATE_COUNTS = (5, 6, 7)


@dataclass
class TrainedModels:
    """The surrogate with whichever baselines the experiment asks for."""

    surrogate: SurrogateModel
    classical: Optional[ClassicalModel] = None
    conventional: Optional[ConstitutiveModel] = None

    def items(self) -> List[Tuple[str, Any]]:
        named: List[Tuple[str, Any]] = [(SURROGATE, self.surrogate)]
        if self.classical is not None:
            named.append((CLASSICAL, self.classical))
        if self.conventional is not None:
            named.append((CONVENTIONAL, self.conventional))
        return named


def train_models(
    spec: ExperimentSpec,
    data: BranchDataset,
    constraint_states: Optional[Sequence[DeformationState]] = None,
) -> TrainedModels:
    """Train the surrogate and the declared baselines on one dataset."""
    constraints = None
    if constraint_states is not None and data.branch is Branch.V_ISO:
        constraints = dissipation_constraints(constraint_states)

    star = build_star_dataset(data)
    surrogate = train_surrogate(
        data.branch, star, constraints=constraints, settings=spec.gpr, seed=spec.seed
    )
    classical = (
        train_classical(data, settings=spec.gpr, seed=spec.seed) if spec.classical else None
    )
    conventional = None
    if spec.baseline_family:
        conventional = calibrate(
            spec.baseline_family, list(data.records), components=spec.calibration_components
        )
    return TrainedModels(surrogate=surrogate, classical=classical, conventional=conventional)


def testing_samples(
    truth: ConstitutiveModel, spec: ExperimentSpec, training: Sequence[Sample]
) -> List[Sample]:
    """Testing-grid samples, minus points that coincide with a training record."""
    seen = {state_key(sample.state) for sample in training}
    samples = sample_grids(truth, spec.testing)
    kept = [s for s in samples if state_key(s.state) not in seen]
    if len(kept) < len(samples):
        logger.debug(f"Dropped {len(samples) - len(kept)} testing points shared with training")
    return kept


def _zero_shear(
    samples: Sequence[Sample], predictions: Sequence[SymTensor3], scale: float
) -> Optional[bool]:
    shear = [
        p.voigt[5]
        for s, p in zip(samples, predictions)
        if s.point.mode is DeformationMode.SHEAR
    ]
    if not shear:
        return None
    return bool(np.max(np.abs(shear)) <= 1e-12 * scale)


def _min_dissipation(table: pd.DataFrame) -> Dict[str, float]:
    testing = table[table["region"] != "training"]
    minima = {}
    for (grid, mode), rows in testing.groupby(["grid", "mode"], sort=True):
        minima[f"{mode}_{grid}"] = float(rows["pred_dissipation"].min())
    return minima


def _model_kind(model: Any) -> str:
    if isinstance(model, SurrogateModel):
        return "surrogate"
    if isinstance(model, ClassicalModel):
        return "classical"
    return "analytic"


def _evaluate(
    name: str,
    model: Any,
    samples: Sequence[Sample],
    threshold: float,
    rate_dependent: bool,
) -> Tuple[ModelSummary, pd.DataFrame]:
    predictions = [predict_stress(model, s.state) for s in samples]
    table = point_table(samples, predictions, threshold, rate_dependent)
    n_excluded = int(table["excluded"].astype(bool).sum()) if len(table) else 0
    if n_excluded:
        logger.warning(f"{name}: {n_excluded} points with near-zero truth excluded from err")
    model_summary = ModelSummary(
        name=name, kind=_model_kind(model), regions=summarize_regions(table)
    )
    if isinstance(model, ConstitutiveModel):
        model_summary.parameters = dict(model.params)
    if isinstance(model, ClassicalModel):
        scale = max((s.truth.norm() for s in samples), default=0.0)
        model_summary.zero_shear = _zero_shear(samples, predictions, scale)
    if rate_dependent:
        model_summary.min_dissipation = _min_dissipation(table)
    return model_summary, table


def _log_summary(label: str, model_summary: ModelSummary) -> None:
    logger.info(
        f"{label}/{model_summary.name}: "
        + ", ".join(
            f"{region} {s.mean_err:.3g}%"
            for region, s in model_summary.regions.items()
            if s.mean_err is not None
        )
    )


def evaluate_records(
    model: Any,
    states: Sequence[DeformationState],
    truths: Sequence[SymTensor3],
    name: str = "model",
    region: str = "same_mode",
) -> ErrorReport:
    """Score one model against (state, stress) records, all filed under ``region``.

    Raises:
        ValueError: If there are no records or the region is unknown.
    """
    if region not in REGIONS:
        raise ValueError(f"Unknown region '{region}'. Known: {', '.join(REGIONS)}")
    samples = record_samples(states, truths, region)
    if not samples:
        raise ValueError("No records to evaluate")
    threshold = EXCLUSION_FRACTION * max(s.truth.norm() for s in samples)
    rate_dependent = any(not s.state.is_quasi_static for s in samples)

    summary = ReportSummary(
        experiment_id="evaluate",
        dataset_hash=records_hash(list(zip(states, truths))),
        exclusion_threshold=threshold,
    )
    model_summary, table = _evaluate(name, model, samples, threshold, rate_dependent)
    summary.models[name] = model_summary
    _log_summary("evaluate", model_summary)
    return ErrorReport(summary=summary, tables={name: table})


def run_experiment(
    spec: ExperimentSpec,
    output_dir: Optional[Union[str, Path]] = None,
    write: bool = True,
) -> ErrorReport:
    """Train, evaluate over training, same-mode and cross-mode regions, and report.

    Raises:
        ExperimentError: Wrapping any library failure, with the experiment context.
    """
    try:
        return _run(spec, output_dir, write)
    except ExperimentError:
        raise
    except ViscoGPError as exc:
        raise ExperimentError(
            f"The {spec.experiment_id} experiment failed: {exc}",
            context={"experiment": spec.experiment_id, "seed": spec.seed},
        ) from exc


def _run(
    spec: ExperimentSpec, output_dir: Optional[Union[str, Path]], write: bool
) -> ErrorReport:
    truth = spec.ground_truth.build()
    training = sample_grids(truth, spec.training, region="training")
    data = to_dataset(truth, training)

    constraint_states = None
    if spec.constraint_grids:
        constraint_states = [s.state for s in sample_grids(truth, spec.constraint_grids)]
    models = train_models(spec, data, constraint_states)

    samples = training + testing_samples(truth, spec, training)
    scale = max(s.truth.norm() for s in samples)
    threshold = EXCLUSION_FRACTION * scale
    rate_dependent = truth.branch is Branch.V_ISO

    star_hash = models.surrogate.provenance.get("dataset_hash", "")
    summary = ReportSummary(
        experiment_id=spec.experiment_id,
        seed=spec.seed,
        ground_truth=spec.ground_truth,
        dataset_hash=str(star_hash),
        n_train=len(data),
        exclusion_threshold=threshold,
    )
    tables = {}
    for name, model in models.items():
        summary.models[name], tables[name] = _evaluate(
            name, model, samples, threshold, rate_dependent
        )
        _log_summary(spec.experiment_id, summary.models[name])

    if rate_dependent:
        states = constraint_states if constraint_states is not None else data.states
        constraints = dissipation_constraints(states)
        summary.constraint_min_dissipation = float(
            constraint_values(models.surrogate.gp, constraints).min()
        )

    report = ErrorReport(summary=summary, tables=tables)
    if write:
        target = resolve_output_dir(output_dir, spec.output_dir)
        report.write(target)
        write_dataset(target / "training.csv", data)
        for name, model in models.items():
            save_model(target / f"{name}.json", model)
    return report


def spec_for_size(spec: ExperimentSpec, size: int) -> ExperimentSpec:
    """The experiment with its training grid resized to ``size`` records.

    One-dimensional experiments use ``size`` strain points. Rate-dependent
    experiments factor ``size`` as n_rates × n_stretches with n_rates in
    5, 6 or 7, rates spread uniformly over the original rate range.

    Raises:
        ValueError: If the size does not fit the grid rule.
    """
    if len(spec.training) != 1:
        raise ValueError("Size sweeps need exactly one training grid")
    grid = spec.training[0]

    if not spec.rate_dependent:
        if size < 2:
            raise ValueError(f"Sweep size must be at least 2, got {size}")
        resized = grid.model_copy(
            update={"strain": grid.strain.model_copy(update={"count": size})}
        )
    else:
        for n_rates in SWEEP_RATE_COUNTS:
            if size % n_rates == 0 and size // n_rates >= 2:
                break
        else:
            raise ValueError(
                f"Sweep size {size} is not n_rates x n_stretches with n_rates in "
                f"{', '.join(str(n) for n in SWEEP_RATE_COUNTS)}"
            )
        rates = np.linspace(min(grid.rates), max(grid.rates), n_rates)
        resized = grid.model_copy(
            update={
                "strain": grid.strain.model_copy(update={"count": size // n_rates}),
                "rates": [float(r) for r in rates],
            }
        )
    return spec.model_copy(update={"training": [resized], "constraint_grids": None})


def _testing_mean(table: pd.DataFrame) -> Optional[float]:
    errors = table.loc[table["region"] != "training", "err"].dropna()
    return float(errors.mean()) if len(errors) else None


def size_sweep(
    spec: ExperimentSpec,
    sizes: Sequence[int],
    output_dir: Optional[Union[str, Path]] = None,
    write: bool = True,
) -> pd.DataFrame:
    """One experiment per training size, all with the experiment's seed.

    Returns:
        Rows of (size, model, train/same-mode/cross-mode/test mean err), ordered by size.
    """
    resized = [spec_for_size(spec, size) for size in sorted(sizes)]
    rows = []
    for size, sized_spec in zip(sorted(sizes), resized):
        logger.info(f"Sweep {spec.experiment_id}: size {size}")
        report = run_experiment(sized_spec, write=False)
        for name, model_summary in report.summary.models.items():
            rows.append({
                "size": size,
                "model": name,
                "train_mean_err": model_summary.regions["training"].mean_err,
                "same_mode_mean_err": model_summary.regions["same_mode"].mean_err,
                "cross_mode_mean_err": model_summary.regions["cross_mode"].mean_err,
                "test_mean_err": _testing_mean(report.tables[name]),
            })
    table = pd.DataFrame(rows)
    if write:
        target = resolve_output_dir(output_dir, spec.output_dir)
        atomic_write_text(target / "sweep.csv", table.to_csv(index=False, float_format="%.17g"))
        logger.info(f"Wrote sweep table to {target / 'sweep.csv'}")
    return table
