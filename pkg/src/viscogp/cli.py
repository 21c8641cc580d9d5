"""viscogp Command Line Interface."""

import logging
import sys
from pathlib import Path
from typing import List, NoReturn, Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from viscogp import __version__
from viscogp.core.config import (
    EXPERIMENT_ALIASES,
    EXPERIMENT_IDS,
    ExperimentSpec,
    GprSettings,
    resolve_experiment_id,
)
from viscogp.core.errors import ViscoGPError
from viscogp.core.paths import ALLOWED_CONFIGS, resolve_output_dir, validate_file_type
from viscogp.harness.report import REGIONS, ErrorReport

console = Console()

BRANCHES = ("vol", "h_iso", "v_iso")


def _fail(exc: Exception) -> NoReturn:
    console.print(f"[red]{type(exc).__name__}: {exc}[/red]")
    sys.exit(1)


def _spinner() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
    )


def _format_err(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.3g}%"


def _report_table(report: ErrorReport, title: str) -> Table:
    table = Table(title=title)
    table.add_column("Model", style="cyan")
    table.add_column("Region")
    table.add_column("Points", justify="right")
    table.add_column("Excluded", justify="right")
    table.add_column("Mean err", style="green", justify="right")
    table.add_column("Max err", justify="right")
    for name, summary in report.summary.models.items():
        for region, stats in summary.regions.items():
            if stats.n_points == 0:
                continue
            table.add_row(
                name,
                region,
                str(stats.n_points),
                str(stats.n_excluded),
                _format_err(stats.mean_err),
                _format_err(stats.max_err),
            )
    return table


def _parse_sizes(ctx: click.Context, param: click.Parameter, value: str) -> List[int]:
    try:
        sizes = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'") from None
    if not sizes:
        raise click.BadParameter("at least one size is required")
    return sizes


@click.group()
@click.version_option(version=__version__, prog_name="viscogp")
@click.option("--verbose", "-v", is_flag=True, help="Show debug logging")
def main(verbose: bool) -> None:
    """viscogp - Gaussian-process constitutive models for visco-hyperelastic materials

    Train invariant-based surrogates, compare them against classical and
    conventional baselines, and reproduce the reference experiments.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


# ============================================================================
# Configuration and Data
# ============================================================================


@main.command()
@click.argument("experiment", type=click.Choice(EXPERIMENT_IDS))
@click.option("--path", "-p", type=click.Path(), default=None,
              help="Config file to write (.yaml, .yml or .json)")
def init(experiment: str, path: Optional[str]) -> None:
    """Write the preset configuration of an experiment."""
    target = Path(path) if path else Path(f"{experiment}.yaml")
    try:
        validate_file_type(target, ALLOWED_CONFIGS, "config")
        spec = ExperimentSpec.preset(experiment)
        spec.save(target)
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    console.print(Panel.fit(
        f"[green]Config written![/green]\n\n"
        f"Experiment: [cyan]{experiment}[/cyan]\n"
        f"File: [cyan]{target}[/cyan]\n\n"
        "Next steps:\n"
        f"1. Edit grids or GPR settings in [cyan]{target}[/cyan]\n"
        f"2. Run [cyan]viscogp generate {target}[/cyan]",
        title="viscogp"
    ))


@main.command()
@click.argument("config", type=click.Path(exists=True))
@click.option("--grid", type=click.Choice(["training", "testing"]), default="training",
              help="Which grids of the config to sample")
@click.option("--output", "-o", type=click.Path(), default=None,
              help="Dataset CSV (default: <output dir>/<grid>.csv)")
def generate(config: str, grid: str, output: Optional[str]) -> None:
    """Sample the ground-truth model of CONFIG into a dataset CSV."""
    from viscogp.harness.generation import generate_dataset
    from viscogp.harness.io import write_dataset

    try:
        spec = ExperimentSpec.load(Path(config))
        data = generate_dataset(spec, grid)
        target = Path(output) if output else resolve_output_dir(None, spec.output_dir)
        if not output:
            target = target / f"{grid}.csv"
        write_dataset(target, data)
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    console.print(
        f"[green]✓[/green] {len(data)} {data.branch.value} records "
        f"written to [cyan]{target}[/cyan]"
    )


# ============================================================================
# Models
# ============================================================================


@main.command()
@click.argument("dataset", type=click.Path(exists=True))
@click.option("--branch", "-b", type=click.Choice(BRANCHES), required=True,
              help="Stress branch the dataset holds")
@click.option("--classical", is_flag=True, help="Train the black-box strain-to-stress baseline")
@click.option("--rate-dependent/--rate-free", default=None,
              help="Classical inputs with or without vec(Ċ) (default: by branch)")
@click.option("--alpha", type=float, default=None, help="Noise level (default: config or 1e-4)")
@click.option("--seed", type=int, default=None, help="Seed of the restart design")
@click.option("--config", "-c", type=click.Path(exists=True), default=None,
              help="Experiment config whose GPR settings to use")
@click.option("--output", "-o", type=click.Path(), required=True, help="Model JSON to write")
def train(
    dataset: str,
    branch: str,
    classical: bool,
    rate_dependent: Optional[bool],
    alpha: Optional[float],
    seed: Optional[int],
    config: Optional[str],
    output: str,
) -> None:
    """Train a surrogate (or the classical baseline) on DATASET."""
    from viscogp.harness.io import read_dataset, save_model
    from viscogp.surrogate import build_star_dataset, train_classical, train_surrogate

    try:
        settings = GprSettings()
        if config:
            spec = ExperimentSpec.load(Path(config))
            settings = spec.gpr
            seed = spec.seed if seed is None else seed
        seed = seed or 0

        data = read_dataset(Path(dataset), branch)
        with _spinner() as progress:
            task = progress.add_task(f"Training on {len(data)} records...", total=None)
            if classical:
                model = train_classical(
                    data, rate_dependent=rate_dependent, alpha=alpha, settings=settings, seed=seed
                )
            else:
                star = build_star_dataset(data)
                model = train_surrogate(
                    data.branch, star, alpha=alpha, settings=settings, seed=seed
                )
            progress.update(task, completed=True)
        save_model(Path(output), model)
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    params = model.gp.params
    table = Table(title="Trained Model")
    table.add_column("Field", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("Kind", "classical" if classical else f"{branch} surrogate")
    table.add_row("Training points", str(model.gp.n_train))
    table.add_row("σ_f", f"{params.sigma_f:.4g}")
    table.add_row("Length scale", f"{params.length_scale:.4g}")
    table.add_row("Noise", f"{params.alpha:.1e}")
    table.add_row("Converged", "yes" if model.gp.converged else "[yellow]no[/yellow]")
    console.print(table)
    console.print(f"\nModel written to [cyan]{output}[/cyan]")


@main.command()
@click.argument("model", type=click.Path(exists=True))
@click.argument("states", type=click.Path(exists=True))
@click.option("--output", "-o", type=click.Path(), required=True, help="Stress CSV to write")
def predict(model: str, states: str, output: str) -> None:
    """Predict stresses of MODEL at the deformation states in STATES."""
    from viscogp.harness.io import load_model, read_states, write_records
    from viscogp.surrogate import predict_stress

    try:
        loaded = load_model(Path(model))
        deformations = read_states(Path(states))
        stresses = [predict_stress(loaded, state) for state in deformations]
        write_records(Path(output), deformations, stresses)
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    console.print(
        f"[green]✓[/green] {len(stresses)} predictions written to [cyan]{output}[/cyan]"
    )


@main.command()
@click.argument("model", type=click.Path(exists=True))
@click.argument("truth", type=click.Path(exists=True))
@click.option("--region", type=click.Choice(REGIONS), default="same_mode",
              help="Region the records are reported under")
@click.option("--output-dir", type=click.Path(), default=None,
              help="Write per-point tables and summary.json here")
def evaluate(model: str, truth: str, region: str, output_dir: Optional[str]) -> None:
    """Score MODEL against the records of TRUTH."""
    from viscogp.harness.experiment import evaluate_records
    from viscogp.harness.io import load_model, read_records

    name = Path(model).stem
    try:
        loaded = load_model(Path(model))
        states, stresses = read_records(Path(truth))
        report = evaluate_records(loaded, states, stresses, name=name, region=region)
        if output_dir:
            report.write(Path(output_dir))
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    console.print(_report_table(report, f"Errors of {name}"))
    if output_dir:
        console.print(f"\nReport written to [cyan]{output_dir}[/cyan]")


# ============================================================================
# Experiments
# ============================================================================


@main.command()
@click.argument("config", type=click.Path(exists=True))
@click.option("--sizes", required=True, callback=_parse_sizes,
              help="Comma-separated training sizes, e.g. 26,51,101")
@click.option("--seed", type=int, default=None, help="Override the config seed")
@click.option("--output-dir", type=click.Path(), default=None, help="Directory for sweep.csv")
def sweep(config: str, sizes: List[int], seed: Optional[int], output_dir: Optional[str]) -> None:
    """Repeat the experiment of CONFIG over training sizes."""
    from viscogp.harness.experiment import size_sweep

    try:
        spec = ExperimentSpec.load(Path(config))
        if seed is not None:
            spec = spec.model_copy(update={"seed": seed})
        with _spinner() as progress:
            task = progress.add_task(f"Sweeping {len(sizes)} sizes...", total=None)
            results = size_sweep(spec, sizes, output_dir=output_dir)
            progress.update(task, completed=True)
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    table = Table(title=f"Size Sweep: {spec.experiment_id}")
    table.add_column("Size", justify="right")
    table.add_column("Model", style="cyan")
    table.add_column("Train", justify="right")
    table.add_column("Same mode", justify="right")
    table.add_column("Cross mode", justify="right")
    table.add_column("Test", style="green", justify="right")
    for row in results.itertuples(index=False):
        table.add_row(
            str(row.size),
            row.model,
            _format_err(row.train_mean_err),
            _format_err(row.same_mode_mean_err),
            _format_err(row.cross_mode_mean_err),
            _format_err(row.test_mean_err),
        )
    console.print(table)


@main.command()
@click.argument("experiment", type=click.Choice(EXPERIMENT_IDS + tuple(EXPERIMENT_ALIASES)))
@click.option("--seed", type=int, default=None, help="Override the preset seed")
@click.option("--output-dir", type=click.Path(), default=None,
              help="Report directory (default: $VISCOGP_OUTPUT_DIR or results/<experiment>)")
def reproduce(experiment: str, seed: Optional[int], output_dir: Optional[str]) -> None:
    """Run a reference experiment end to end.

    EXPERIMENT is an experiment id or its number (5.1, 5.2 or 5.3).
    """
    from viscogp.harness.experiment import run_experiment

    experiment = resolve_experiment_id(experiment)

    try:
        spec = ExperimentSpec.preset(experiment)
        if seed is not None:
            spec = spec.model_copy(update={"seed": seed})
        target = resolve_output_dir(output_dir, spec.output_dir)
        with _spinner() as progress:
            task = progress.add_task(f"Running {experiment} experiment...", total=None)
            report = run_experiment(spec, output_dir=target)
            progress.update(task, completed=True)
    except (ViscoGPError, ValueError) as exc:
        _fail(exc)

    console.print(_report_table(report, f"Experiment: {experiment}"))
    minimum = report.summary.constraint_min_dissipation
    if minimum is not None:
        console.print(f"Minimum constrained dissipation: {minimum:.3e}")
    console.print(f"\nReport written to [cyan]{target}[/cyan]")


if __name__ == "__main__":
    main()
