"""
Data Loading Utilities - Experiment configs and network checkpoints
"""

import json
import os
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import yaml

from agents.decor_trainer_agent import S0_POLICIES, TrainerConfig
from tools.decor_tool import CHECKPOINT_FORMAT_VERSION, DecorParams
from utils.config import MODES, NOISE_KINDS, Config, ExperimentConfig, NoiseModel
from utils.errors import ConfigError, DomainError

CONFIG_KEYS = (
    "mode", "n", "code_lengths", "depth", "epochs", "candidates", "radius_init", "shrink",
    "clutter_power", "target_power", "noise_covariance", "trials", "seed", "output_path",
    "checkpoint_path", "s0_policy",
)


def load_config(path: str) -> ExperimentConfig:
    """
    Load an experiment configuration from a YAML file.

    Every key is optional except that the file must be a mapping; missing
    keys take the ExperimentConfig / TrainerConfig defaults.

    Args:
        path: Path to the YAML file

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigError: Missing file, YAML parse error, unknown key or invalid
            value (message carries the key and line when known)
    """
    if not os.path.exists(path):
        raise ConfigError(f"Could not find config file: {path}")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()

    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        values = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError(f"YAML parse error in {path}: {getattr(e, 'problem', e)}",
                          line=mark.line + 1 if mark is not None else None)

    if root is None:
        return parse_config({}, {})
    if not isinstance(root, yaml.MappingNode) or not isinstance(values, dict):
        raise ConfigError(f"config file {path} must contain a mapping of keys", line=1)

    lines: Dict[str, int] = {}
    for key_node, _ in root.value:
        key = str(key_node.value)
        if key in lines:
            raise ConfigError("duplicate key", key=key, line=key_node.start_mark.line + 1)
        lines[key] = key_node.start_mark.line + 1
    return parse_config(values, lines)


def parse_config(values: Dict[str, Any], lines: Dict[str, int]) -> ExperimentConfig:
    """Validate a key/value mapping into an ExperimentConfig"""
    for key in values:
        if key not in CONFIG_KEYS:
            raise ConfigError("unknown key", key=str(key), line=lines.get(key))

    def get(key: str, convert: Callable[[Any], Any], default: Any) -> Any:
        if key not in values or values[key] is None:
            return default
        try:
            return convert(values[key])
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid value {values[key]!r}: {e}", key=key, line=lines.get(key))

    def check(condition: bool, key: str, message: str) -> None:
        if not condition:
            raise ConfigError(message, key=key, line=lines.get(key))

    defaults = ExperimentConfig()
    trainer_defaults = TrainerConfig()

    mode = get("mode", str, defaults.mode)
    check(mode in MODES, "mode", f"mode must be one of {MODES}")
    n = get("n", _integer, defaults.n)
    check(n >= 2, "n", "n must be >= 2")
    code_lengths = get("code_lengths", _integer_list, list(defaults.code_lengths))
    check(len(code_lengths) > 0 and all(length >= 2 for length in code_lengths), "code_lengths",
          "code_lengths must be a non-empty list of values >= 2")
    depth = get("depth", _integer, trainer_defaults.depth)
    check(depth >= 1, "depth", "depth must be >= 1")
    epochs = get("epochs", _integer, trainer_defaults.epochs)
    check(epochs >= 0, "epochs", "epochs must be >= 0")
    candidates = get("candidates", _integer, trainer_defaults.candidates)
    check(candidates >= 1, "candidates", "candidates must be >= 1")
    radius_init = get("radius_init", _real, trainer_defaults.radius_init)
    check(radius_init > 0, "radius_init", "radius_init must be positive")
    shrink = get("shrink", _real, trainer_defaults.shrink)
    check(0 < shrink <= 1, "shrink", "shrink must lie in (0, 1]")
    clutter_power = get("clutter_power", _real, defaults.clutter_power)
    check(clutter_power >= 0, "clutter_power", "clutter_power must be >= 0")
    target_power = get("target_power", _real, defaults.target_power)
    check(target_power >= 0, "target_power", "target_power must be >= 0")
    noise = get("noise_covariance", _noise_model, defaults.noise)
    check(noise.factor >= 0, "noise_covariance", "noise factor must be >= 0")
    trials = get("trials", _integer, defaults.trials)
    check(trials >= 1, "trials", "trials must be >= 1")
    seed = get("seed", _integer, defaults.seed)
    check(seed >= 0, "seed", "seed must be >= 0")
    output_path = get("output_path", str, f"decor_{mode.replace('-', '_')}.csv")
    checkpoint_path = get("checkpoint_path", str, None)
    s0_policy = get("s0_policy", str, trainer_defaults.s0_policy)
    check(s0_policy in S0_POLICIES, "s0_policy", f"s0_policy must be one of {S0_POLICIES}")

    trainer = TrainerConfig(
        candidates=candidates,
        radius_init=radius_init,
        shrink=shrink,
        epochs=epochs,
        seed=seed,
        s0_policy=s0_policy,
        depth=depth,
        workers=Config.WORKERS,
    )
    return ExperimentConfig(
        mode=mode,
        n=n,
        code_lengths=code_lengths,
        trials=trials,
        clutter_power=clutter_power,
        target_power=target_power,
        noise=noise,
        seed=seed,
        output_path=output_path,
        checkpoint_path=checkpoint_path,
        trainer=trainer,
    )


def _integer(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError("expected an integer")
    return value


def _real(value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError("expected a number")
    return float(value)


def _integer_list(value: Any) -> List[int]:
    if not isinstance(value, list):
        raise TypeError("expected a list of integers")
    return [_integer(item) for item in value]


def _noise_model(value: Any) -> NoiseModel:
    """
    Accepts `identity`, `scaled-identity <factor>` or `{scaled-identity: <factor>}`.
    """
    if isinstance(value, dict):
        if len(value) != 1:
            raise ValueError("expected a single {kind: factor} entry")
        kind, factor = next(iter(value.items()))
    elif isinstance(value, str):
        parts = value.split()
        kind = parts[0] if parts else ""
        factor = parts[1] if len(parts) > 1 else None
        if len(parts) > 2:
            raise ValueError("expected 'identity' or 'scaled-identity <factor>'")
    else:
        raise TypeError("expected 'identity' or 'scaled-identity <factor>'")

    if kind not in NOISE_KINDS:
        raise ValueError(f"noise kind must be one of {NOISE_KINDS}")
    if kind == "identity":
        if factor is not None:
            raise ValueError("identity takes no factor")
        return NoiseModel()
    if factor is None:
        raise ValueError("scaled-identity needs a factor")
    return NoiseModel(kind=kind, factor=_real(float(factor) if isinstance(factor, str) else factor))


def load_checkpoint(path: str) -> DecorParams:
    """
    Load DECoR weights saved by utils.data_saver.save_checkpoint.

    Raises:
        ConfigError: Missing file or malformed checkpoint
    """
    if not os.path.exists(path):
        raise ConfigError(f"Could not find checkpoint file: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        header = payload["metadata"]
        if header["format_version"] != CHECKPOINT_FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {header['format_version']}")
        n, depth = int(header["n"]), int(header["depth"])
        layers = []
        for flat in payload["layers"]:
            pairs = np.asarray(flat, dtype=float).reshape(n, n, 2)
            layers.append(pairs[..., 0] + 1j * pairs[..., 1])
        if len(layers) != depth:
            raise ValueError(f"header says depth {depth}, found {len(layers)} layers")
        return DecorParams(layers)
    except (KeyError, TypeError, ValueError, DomainError) as e:
        raise ConfigError(f"Malformed checkpoint {path}: {e}")
