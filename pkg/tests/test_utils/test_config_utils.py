"""Unit tests for config_utils module."""

import pytest
import yaml

from rmatrix.utils.config_utils import (
    DEFAULT_CONFIG,
    TOLERANCE_ENV_VAR,
    apply_tolerance_override,
    load_config,
    save_default_config,
    tolerance,
)


@pytest.mark.unit
class TestLoadConfig:
    """Unit tests for load_config."""

    def test_defaults(self):
        """Test that no path returns a copy of the defaults."""
        config = load_config()
        assert config == DEFAULT_CONFIG
        config["tolerances"]["mcybe"] = 1.0
        assert DEFAULT_CONFIG["tolerances"]["mcybe"] == 1e-10

    def test_deep_merge(self, temp_dir):
        """Test that user values override without dropping siblings."""
        path = temp_dir / "config.yaml"
        path.write_text("tolerances:\n  mcybe: 1.0e-8\nintegrator:\n  step: 0.01\n", encoding="utf-8")

        config = load_config(path)
        assert config["tolerances"]["mcybe"] == 1e-8
        assert config["tolerances"]["closure"] == 1e-10
        assert config["integrator"]["step"] == 0.01
        assert config["integrator"]["method"] == "rk4"

    def test_missing_file(self, temp_dir):
        """Test a missing config raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_config(temp_dir / "nope.yaml")

    def test_invalid_yaml(self, temp_dir):
        """Test malformed YAML raises YAMLError."""
        path = temp_dir / "bad.yaml"
        path.write_text("tolerances: [unclosed\n", encoding="utf-8")
        with pytest.raises(yaml.YAMLError):
            load_config(path)

    @pytest.mark.parametrize(
        "content, message",
        [
            ("tolerances:\n  mcybe: -1\n", "mcybe"),
            ("integrator:\n  method: euler\n", "method"),
            ("integrator:\n  step: 0\n", "step"),
            ("integrator:\n  t_end: -2\n", "t_end"),
            ("integrator:\n  record_every: 0\n", "record_every"),
            ("factorization:\n  expm_norm_bound: 0\n", "expm_norm_bound"),
            ("random:\n  samples: 0\n", "samples"),
            ("random:\n  seed: -3\n", "seed"),
        ],
    )
    def test_validation(self, temp_dir, content, message):
        """Test invalid values are rejected with the offending key."""
        path = temp_dir / "config.yaml"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(ValueError, match=message):
            load_config(path)

    def test_save_default_round_trip(self, temp_dir):
        """Test that the saved default config loads back unchanged."""
        path = temp_dir / "rmatrix.yaml"
        save_default_config(path)
        assert load_config(path) == DEFAULT_CONFIG


@pytest.mark.unit
class TestTolerances:
    """Unit tests for tolerance lookup and the environment override."""

    def test_lookup(self, default_config):
        """Test lookup from config with fallback to defaults."""
        default_config["tolerances"]["mcybe"] = 0.5
        assert tolerance(default_config, "mcybe") == 0.5
        assert tolerance(None, "closure") == 1e-10
        assert tolerance({"tolerances": {}}, "tensor") == 1e-11

    def test_unknown_key(self):
        """Test unknown tolerance names raise KeyError."""
        with pytest.raises(KeyError):
            tolerance(None, "no-such-tolerance")

    def test_override_scales(self, default_config):
        """Test every tolerance is multiplied."""
        scaled = apply_tolerance_override(default_config, {TOLERANCE_ENV_VAR: "10"})
        assert scaled["tolerances"]["mcybe"] == pytest.approx(1e-9)
        assert scaled["tolerances"]["conservation"] == pytest.approx(1e-7)
        assert default_config["tolerances"]["mcybe"] == 1e-10

    @pytest.mark.parametrize("env", [{}, {TOLERANCE_ENV_VAR: ""}, {TOLERANCE_ENV_VAR: "  "}])
    def test_override_absent(self, default_config, env):
        """Test unset or blank values leave the config alone."""
        assert apply_tolerance_override(default_config, env) is default_config

    @pytest.mark.parametrize("raw", ["abc", "0", "-2"])
    def test_override_invalid(self, default_config, raw):
        """Test non-numeric and non-positive multipliers are rejected."""
        with pytest.raises(ValueError, match=TOLERANCE_ENV_VAR):
            apply_tolerance_override(default_config, {TOLERANCE_ENV_VAR: raw})

    def test_override_from_environment(self, default_config, monkeypatch):
        """Test the process environment is read by default."""
        monkeypatch.setenv(TOLERANCE_ENV_VAR, "2")
        scaled = apply_tolerance_override(default_config)
        assert scaled["tolerances"]["closure"] == pytest.approx(2e-10)
