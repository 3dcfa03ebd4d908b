"""Unit tests for configuration loading."""

import os
import tempfile
from pathlib import Path

import pytest

from planar_decomp.config import RunConfig, load_config


def test_load_config_valid():
    """Test loading valid configuration."""
    config_content = """
engine:
  mode: plain
  case: 3
  oracle_threshold: 8
  verify_steps: true
  workers: 2
  seed: 42

logging:
  dir: /tmp/decomp-logs
  level: debug
"""

    with tempfile.TemporaryDirectory() as tmpdir:
        config_file = Path(tmpdir) / "config.yaml"
        config_file.write_text(config_content)

        config = load_config(str(config_file))

        assert config.mode == "plain"
        assert config.case == "3"
        assert config.oracle_threshold == 8
        assert config.verify_steps is True
        assert config.check_class is True
        assert config.workers == 2
        assert config.seed == 42
        assert config.log_dir == "/tmp/decomp-logs"
        assert config.log_level == "DEBUG"


def test_load_config_defaults_without_file(monkeypatch):
    """Test that a missing default config file gives the defaults."""
    monkeypatch.delenv("PLANAR_DECOMP_CONFIG", raising=False)
    monkeypatch.delenv("PLANAR_DECOMP_WORKERS", raising=False)
    with tempfile.TemporaryDirectory() as tmpdir:
        monkeypatch.chdir(tmpdir)
        config = load_config()

    assert config == RunConfig()


def test_load_config_file_not_found():
    """Test that an explicitly requested file must exist."""
    with pytest.raises(FileNotFoundError):
        load_config("/nonexistent/config.yaml")


def test_load_config_empty_file():
    """Test that an empty config file raises ValueError."""
    with tempfile.TemporaryDirectory() as tmpdir:
        config_file = Path(tmpdir) / "config.yaml"
        config_file.write_text("")

        with pytest.raises(ValueError, match="Config file is empty"):
            load_config(str(config_file))


def test_load_config_rejects_unknown_mode():
    """Test that an unknown mode is rejected."""
    with tempfile.TemporaryDirectory() as tmpdir:
        config_file = Path(tmpdir) / "config.yaml"
        config_file.write_text("engine:\n  mode: fancy\n")

        with pytest.raises(ValueError, match="Unknown mode"):
            load_config(str(config_file))


def test_environment_overrides(monkeypatch):
    """Test the config path and worker count from the environment."""
    with tempfile.TemporaryDirectory() as tmpdir:
        config_file = Path(tmpdir) / "other.yaml"
        config_file.write_text("engine:\n  workers: 2\n")
        monkeypatch.setenv("PLANAR_DECOMP_CONFIG", str(config_file))
        monkeypatch.setenv("PLANAR_DECOMP_WORKERS", "6")

        config = load_config()

        assert config.workers == 6
        assert os.environ["PLANAR_DECOMP_CONFIG"] == str(config_file)

        monkeypatch.setenv("PLANAR_DECOMP_CONFIG", str(Path(tmpdir) / "missing.yaml"))
        with pytest.raises(FileNotFoundError):
            load_config()


def test_with_overrides_ignores_none():
    """Test merging command-line values into the configuration."""
    config = RunConfig(oracle_threshold=5)
    merged = config.with_overrides(mode="plain", case=None, workers=3)

    assert merged.mode == "plain"
    assert merged.case == "auto"
    assert merged.workers == 3
    assert merged.oracle_threshold == 5
    assert config.mode == "nice"


def test_run_config_validation():
    """Test range checks on construction."""
    with pytest.raises(ValueError, match="Unknown case"):
        RunConfig(case="5")
    with pytest.raises(ValueError, match="workers"):
        RunConfig(workers=0)
    with pytest.raises(ValueError, match="oracle_threshold"):
        RunConfig(oracle_threshold=-1)


def test_effective_log_level():
    """Test that verbosity overrides the configured level for the run."""
    assert RunConfig(log_level="WARNING").effective_log_level == "WARNING"
    assert RunConfig(log_level="WARNING", verbosity=2).effective_log_level == "DEBUG"
