"""
Configuration Utilities
"""

import os
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from agents.decor_trainer_agent import TrainerConfig
from tools.signal_model_tool import EnvironmentConfig
from utils.errors import ConfigError

# Load environment variables from .env file
load_dotenv()

MODES = ("train", "benchmark", "pmli-design", "oracle")
NOISE_KINDS = ("identity", "scaled-identity")


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"environment variable {name} must be an integer, got {raw!r}")


class Config:
    """Process-wide settings for the DECoR toolkit, overridable from the environment"""

    # Parallelism (candidate evaluation and benchmark cells)
    WORKERS: int = _env_int("DECOR_WORKERS", "1")

    # Logging
    LOG_FILE: Optional[str] = os.getenv("DECOR_LOG_FILE")

    # Model-based designer
    OUTER_ITERS: int = _env_int("DECOR_OUTER_ITERS", "20")
    INNER_ITERS: int = _env_int("DECOR_INNER_ITERS", "30")
    RESTARTS: int = _env_int("DECOR_RESTARTS", "20")

    # Brute-force oracle
    ORACLE_GRID_LEVELS: int = _env_int("DECOR_ORACLE_GRID_LEVELS", "16")

    @classmethod
    def validate(cls) -> bool:
        """Validate that process settings are usable"""
        for name in ("WORKERS", "OUTER_ITERS", "INNER_ITERS", "RESTARTS", "ORACLE_GRID_LEVELS"):
            if getattr(cls, name) < 1:
                raise ConfigError(f"DECOR_{name} must be >= 1, got {getattr(cls, name)}")
        return True


@dataclass(frozen=True)
class NoiseModel:
    """Noise covariance description: identity, or factor * identity"""

    kind: str = "identity"
    factor: float = 1.0

    def covariance(self, n: int) -> np.ndarray:
        scale = 1.0 if self.kind == "identity" else self.factor
        return scale * np.eye(n, dtype=complex)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one CLI run needs"""

    mode: str = "train"
    n: int = 10
    code_lengths: List[int] = field(default_factory=lambda: [10, 25, 50])
    trials: int = 1000
    clutter_power: float = 1.0
    target_power: float = 1.0
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 0
    output_path: str = "decor_output.csv"
    checkpoint_path: Optional[str] = None
    trainer: TrainerConfig = field(default_factory=TrainerConfig)

    def environment(self, n: Optional[int] = None) -> EnvironmentConfig:
        """Environment for code length n (defaults to self.n)"""
        length = self.n if n is None else n
        return EnvironmentConfig(
            n=length,
            clutter_power=self.clutter_power,
            target_power=self.target_power,
            noise_covariance=self.noise.covariance(length),
            seed=self.seed,
        )

    @property
    def env(self) -> EnvironmentConfig:
        return self.environment()

    @property
    def depth(self) -> int:
        return self.trainer.depth

    def with_overrides(self, mode: Optional[str] = None, seed: Optional[int] = None,
                       output_path: Optional[str] = None) -> "ExperimentConfig":
        """Apply CLI overrides; a seed override reaches the trainer too"""
        updated = self
        if mode is not None:
            updated = replace(updated, mode=mode)
        if seed is not None:
            if seed < 0:
                raise ConfigError(f"seed must be non-negative, got {seed}", key="seed")
            updated = replace(updated, seed=seed, trainer=replace(updated.trainer, seed=seed))
        if output_path is not None:
            updated = replace(updated, output_path=output_path)
        return updated
