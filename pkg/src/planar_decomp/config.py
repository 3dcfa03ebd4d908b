"""Configuration loader for planar-decomp."""

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, List

import yaml

MODES = ("nice", "plain")
CASES = ("auto", "1", "2", "3")


@dataclass
class RunConfig:
    """Run configuration: the command being executed plus engine settings."""

    command: str | None = None
    inputs: List[str] = field(default_factory=list)
    mode: str = "nice"
    case: str = "auto"  # auto, or "1" / "2" / "3" to force a hypothesis
    seed: int = 0
    out: str | None = None
    verbosity: int = 0

    workers: int | None = None  # None: one worker per physical CPU
    oracle_threshold: int = 12
    verify_steps: bool = False
    check_class: bool = True
    generator_budget: int = 4000
    fail_fast: bool = False
    log_dir: str | None = "logs"
    log_level: str = "INFO"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"Unknown mode: {self.mode!r} (expected one of {MODES})")
        self.case = str(self.case)
        if self.case not in CASES:
            raise ValueError(f"Unknown case: {self.case!r} (expected one of {CASES})")
        if self.oracle_threshold < 0:
            raise ValueError("oracle_threshold must be non-negative")
        if self.workers is not None and self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def effective_log_level(self) -> str:
        """DEBUG when verbose output was asked for, else the configured level."""
        return "DEBUG" if self.verbosity > 0 else self.log_level

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """
        Return a copy with the given fields replaced; None values are ignored.

        Args:
            overrides: Field values, typically parsed command-line flags

        Returns:
            RunConfig: The merged configuration
        """
        values = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **values)


def load_config(config_path: str | None = None) -> RunConfig:
    """
    Load configuration from YAML file.

    Args:
        config_path: Path to the config file. If None, uses PLANAR_DECOMP_CONFIG
                    env var or defaults to config/config.yaml

    Returns:
        RunConfig: Parsed configuration (defaults when the default file is absent)

    Raises:
        FileNotFoundError: If an explicitly requested config file doesn't exist
        ValueError: If config is invalid
    """
    explicit = config_path is not None or "PLANAR_DECOMP_CONFIG" in os.environ
    if config_path is None:
        config_path = os.getenv("PLANAR_DECOMP_CONFIG", "config/config.yaml")

    config_file = Path(config_path)
    if not config_file.exists():
        if explicit:
            raise FileNotFoundError(f"Config file not found: {config_path}")
        data: dict[str, Any] = {}
    else:
        with open(config_file) as f:
            data = yaml.safe_load(f)
        if not data:
            raise ValueError("Config file is empty")
        if not isinstance(data, dict):
            raise ValueError("Config file must contain a mapping")

    engine = data.get("engine", {}) or {}
    logging_section = data.get("logging", {}) or {}

    workers = os.getenv("PLANAR_DECOMP_WORKERS") or engine.get("workers")

    return RunConfig(
        mode=engine.get("mode", "nice"),
        case=str(engine.get("case", "auto")),
        seed=int(engine.get("seed", 0)),
        workers=int(workers) if workers else None,
        oracle_threshold=int(engine.get("oracle_threshold", 12)),
        verify_steps=bool(engine.get("verify_steps", False)),
        check_class=bool(engine.get("check_class", True)),
        generator_budget=int(engine.get("generator_budget", 4000)),
        fail_fast=bool(engine.get("fail_fast", False)),
        log_dir=logging_section.get("dir", "logs"),
        log_level=str(logging_section.get("level", "INFO")).upper(),
    )
