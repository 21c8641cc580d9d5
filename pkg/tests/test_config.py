"""Tests for viscogp configuration and path helpers."""

import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest
import yaml
from pydantic import ValidationError

from viscogp.core.config import (
    EXPERIMENT_ALIASES,
    EXPERIMENT_IDS,
    WIDE_LOG_LENGTH_SCALE_BOUNDS,
    ExperimentSpec,
    GprSettings,
    GridRange,
    ModeGrid,
    resolve_experiment_id,
)
from viscogp.core.paths import (
    ALLOWED_CONFIGS,
    OUTPUT_DIR_ENV,
    PathValidationError,
    atomic_write_text,
    resolve_output_dir,
    validate_file_type,
)


class TestExperimentSpec:
    """Test ExperimentSpec class."""

    def test_preset_defaults(self):
        """Test default values of a preset."""
        spec = ExperimentSpec.preset("quasistatic")

        assert spec.version == "1.0"
        assert spec.seed == 0
        assert spec.classical is True
        assert spec.baseline_family == "yeoh"
        assert spec.gpr.alpha == 1e-4
        assert spec.gpr.method == "Nelder-Mead"
        assert not spec.rate_dependent

    def test_every_preset_builds(self):
        for experiment_id in EXPERIMENT_IDS:
            spec = ExperimentSpec.preset(experiment_id)
            assert spec.experiment_id == experiment_id
            spec.ground_truth.build()

    def test_dynamic_is_rate_dependent(self):
        assert ExperimentSpec.preset("dynamic").rate_dependent

    def test_unknown_preset(self):
        with pytest.raises(ValueError, match="Unknown experiment"):
            ExperimentSpec.preset("cyclic")

    def test_numbered_aliases(self):
        for alias, experiment_id in EXPERIMENT_ALIASES.items():
            assert resolve_experiment_id(alias) == experiment_id
            assert ExperimentSpec.preset(alias) == ExperimentSpec.preset(experiment_id)
        assert resolve_experiment_id("dynamic") == "dynamic"
        with pytest.raises(ValueError, match="5.1"):
            resolve_experiment_id("5.4")

    def test_extrapolating_presets_widen_length_scale(self):
        """Presets tested far outside their training range allow long length scales."""
        for experiment_id in ("hydrostatic", "dynamic"):
            gpr = ExperimentSpec.preset(experiment_id).gpr
            assert gpr.log_length_scale_bounds == WIDE_LOG_LENGTH_SCALE_BOUNDS
            assert gpr.log_sigma_f_bounds == GprSettings().log_sigma_f_bounds
        assert WIDE_LOG_LENGTH_SCALE_BOUNDS[1] > GprSettings().log_length_scale_bounds[1]
        assert ExperimentSpec.preset("quasistatic").gpr == GprSettings()

    def test_save_and_load_yaml(self):
        """Test saving and loading a YAML spec."""
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "nested" / "spec.yaml"

            spec = ExperimentSpec.preset("hydrostatic").model_copy(update={"seed": 7})
            spec.save(config_path)

            with open(config_path) as f:
                raw = yaml.safe_load(f)
            assert raw["experiment_id"] == "hydrostatic"

            loaded = ExperimentSpec.load(config_path)
            assert loaded.seed == 7
            assert loaded == spec

    def test_save_and_load_json(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            config_path = Path(tmpdir) / "spec.json"
            spec = ExperimentSpec.preset("dynamic")
            spec.save(config_path)
            assert ExperimentSpec.load(config_path) == spec

    def test_load_missing(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            with pytest.raises(FileNotFoundError):
                ExperimentSpec.load(Path(tmpdir) / "absent.yaml")

    def test_nested_settings(self):
        """Test nested configuration objects."""
        spec = ExperimentSpec(
            experiment_id="quasistatic",
            ground_truth={"family": "neo_hookean", "params": {"A10": 1.0}},
            training=[{"mode": "uniaxial", "strain": {"start": 1.0, "stop": 1.2, "count": 5}}],
            gpr=GprSettings(n_restarts=2, method="L-BFGS-B"),
        )

        assert spec.gpr.n_restarts == 2
        assert spec.gpr.method == "L-BFGS-B"
        assert spec.training[0].size == 5
        assert spec.testing == []

    def test_training_required(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(
                experiment_id="hydrostatic",
                ground_truth={"family": "simo_miehe", "params": {"kappa": 1.0}},
                training=[],
            )


class TestGrids:
    """Test grid validation."""

    def test_confined_grid_is_rate_free(self):
        with pytest.raises(ValidationError, match="rate-free"):
            ModeGrid(mode="confined", strain=GridRange(start=0.8, stop=1.0), rates=[5.0])

    def test_rates_required(self):
        with pytest.raises(ValidationError):
            ModeGrid(mode="uniaxial", strain=GridRange(start=1.0, stop=1.2), rates=[])

    def test_grid_needs_two_points(self):
        with pytest.raises(ValidationError):
            GridRange(start=1.0, stop=1.2, count=1)

    def test_bounds_ordered(self):
        with pytest.raises(ValidationError):
            GprSettings(log_length_scale_bounds=(1.0, -1.0))


class TestPaths:
    """Test output directories, file types and atomic writes."""

    def test_explicit_output_dir_wins(self):
        with patch.dict(os.environ, {OUTPUT_DIR_ENV: "/tmp/from-env"}):
            assert resolve_output_dir("out", "configured") == Path("out")

    def test_environment_before_config(self):
        with patch.dict(os.environ, {OUTPUT_DIR_ENV: "/tmp/from-env"}):
            assert resolve_output_dir(None, "configured") == Path("/tmp/from-env")

    def test_config_then_default(self):
        with patch.dict(os.environ, {}, clear=True):
            assert resolve_output_dir(None, "configured") == Path("configured")
            assert resolve_output_dir() == Path("results")

    def test_validate_file_type(self):
        assert validate_file_type(Path("spec.YAML"), ALLOWED_CONFIGS) == Path("spec.YAML")
        with pytest.raises(PathValidationError, match="Invalid config type"):
            validate_file_type(Path("spec.toml"), ALLOWED_CONFIGS, "config")

    def test_atomic_write_replaces_file(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "sub" / "out.txt"
            atomic_write_text(path, "first")
            atomic_write_text(path, "second")

            assert path.read_text() == "second"
            assert [p.name for p in path.parent.iterdir()] == ["out.txt"]
