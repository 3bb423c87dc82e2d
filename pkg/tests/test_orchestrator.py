"""
Tests for the experiment harness: config loading, oracle, CLI runs
"""

import csv
import itertools

import numpy as np
import pytest

from agents.decor_trainer_agent import TrainerConfig
from orchestrator import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_RUNTIME, ExperimentOrchestrator, main
from tools.objective_tool import sinr_objective
from tools.oracle_tool import run_bruteforce_oracle
from tools.signal_model_tool import UnimodularCode
from utils.config import ExperimentConfig
from utils.data_loader import load_checkpoint, load_config, parse_config
from utils.data_saver import CSV_SCHEMA_VERSION
from utils.errors import ConfigError, DomainError, GridTooLargeError


def write_config(tmp_path, text, name="experiment.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_rows(path):
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    assert lines[0].startswith(f"# {CSV_SCHEMA_VERSION}")
    return list(csv.DictReader(lines[1:]))


# ---------------------------------------------------------------- config

def test_minimal_config_fills_defaults(tmp_path):
    cfg = load_config(write_config(tmp_path, "mode: train\nn: 10\ndepth: 30\nepochs: 50\nseed: 1\n"))
    assert cfg.mode == "train" and cfg.n == 10 and cfg.depth == 30 and cfg.seed == 1
    assert cfg.trainer.epochs == 50 and cfg.trainer.seed == 1 and cfg.trainer.depth == 30
    assert cfg.trainer.candidates == 8 and cfg.trainer.radius_init == 0.1 and cfg.trainer.shrink == 0.9
    assert cfg.trials == 1000 and cfg.checkpoint_path is None
    assert cfg.output_path == "decor_train.csv"
    np.testing.assert_array_equal(cfg.env.noise_covariance, np.eye(10))


def test_shrink_out_of_range_names_key_and_line(tmp_path):
    path = write_config(tmp_path, "mode: train\nshrink: 1.5\n")
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert excinfo.value.key == "shrink" and excinfo.value.line == 2
    assert "shrink" in str(excinfo.value)


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError) as excinfo:
        load_config(write_config(tmp_path, "mode: train\nlearning_rate: 0.1\n"))
    assert excinfo.value.key == "learning_rate" and excinfo.value.line == 2


def test_missing_file_and_parse_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.yaml"))
    with pytest.raises(ConfigError) as excinfo:
        load_config(write_config(tmp_path, "mode: train\nn: [10\n"))
    assert excinfo.value.line is not None


def test_noise_covariance_forms(tmp_path):
    cfg = load_config(write_config(tmp_path, "n: 3\nnoise_covariance: identity\n"))
    np.testing.assert_array_equal(cfg.env.noise_covariance, np.eye(3))
    cfg = load_config(write_config(tmp_path, "n: 3\nnoise_covariance: scaled-identity 0.5\n"))
    np.testing.assert_array_equal(cfg.env.noise_covariance, 0.5 * np.eye(3))
    cfg = load_config(write_config(tmp_path, "n: 3\nnoise_covariance: {scaled-identity: 0}\n"))
    np.testing.assert_array_equal(cfg.env.noise_covariance, np.zeros((3, 3)))
    with pytest.raises(ConfigError) as excinfo:
        load_config(write_config(tmp_path, "n: 3\nnoise_covariance: diagonal\n"))
    assert excinfo.value.key == "noise_covariance"


def test_type_errors_name_key():
    with pytest.raises(ConfigError) as excinfo:
        parse_config({"depth": "thirty"}, {"depth": 4})
    assert excinfo.value.key == "depth" and excinfo.value.line == 4
    with pytest.raises(ConfigError):
        parse_config({"code_lengths": [10, 1]}, {})
    with pytest.raises(ConfigError):
        parse_config({"n": True}, {})


# ---------------------------------------------------------------- oracle

def test_oracle_n2_q4_enumeration():
    y = np.array([1.0, 0.0])
    result = run_bruteforce_oracle(2, 4, y)
    assert result.values.shape == (4,)
    direct = [sinr_objective(UnimodularCode.from_phases([0, 2 * np.pi * q / 4]), y) for q in range(4)]
    np.testing.assert_allclose(result.values, direct, rtol=1e-12)
    assert result.best_value == pytest.approx(max(direct))


def test_oracle_binary_phases(rng):
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    result = run_bruteforce_oracle(3, 2, y)
    assert result.values.shape == (4,)
    direct = [sinr_objective(UnimodularCode(np.array((1,) + signs)), y)
              for signs in itertools.product([1, -1], repeat=2)]
    np.testing.assert_allclose(result.values, direct, rtol=1e-12)


def test_oracle_consistency_and_dominance(rng):
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    result = run_bruteforce_oracle(4, 8, y)
    for indices, value in zip(result.phase_indices[::37], result.values[::37]):
        code = UnimodularCode(np.exp(2j * np.pi * indices / 8))
        assert value == pytest.approx(sinr_objective(code, y), rel=1e-12)
    assert result.best_value >= sinr_objective(UnimodularCode.ones(4), y)
    phases = np.angle(result.best_code.entries) * 8 / (2 * np.pi)
    np.testing.assert_allclose(phases, np.round(phases), atol=1e-9)


def test_oracle_rejects_large_grid():
    with pytest.raises(GridTooLargeError):
        run_bruteforce_oracle(6, 16, np.ones(6))
    with pytest.raises(DomainError):
        run_bruteforce_oracle(3, 4, np.ones(4))


# ---------------------------------------------------------------- runs

def test_training_with_zero_epochs(tmp_path):
    output = str(tmp_path / "train.csv")
    cfg = parse_config({"mode": "train", "n": 4, "depth": 3, "epochs": 0, "output_path": output}, {})
    ExperimentOrchestrator(cfg, quiet=True).run()
    rows = read_rows(output)
    assert len(rows) == 1 and rows[0]["epoch"] == "0"
    assert list(rows[0].keys()) == ["epoch", "incumbent_value", "best_candidate_value", "accepted", "radius"]


def test_training_csv_is_monotone_and_byte_identical(tmp_path):
    outputs = []
    for name in ("first.csv", "second.csv"):
        output = str(tmp_path / name)
        checkpoint = str(tmp_path / f"{name}.json")
        cfg = parse_config({"mode": "train", "n": 10, "depth": 30, "epochs": 50, "seed": 1,
                            "output_path": output, "checkpoint_path": checkpoint}, {})
        ExperimentOrchestrator(cfg, quiet=True).run()
        outputs.append(output)
    values = [float(row["incumbent_value"]) for row in read_rows(outputs[0])]
    assert len(values) == 51
    assert all(b >= a for a, b in zip(values, values[1:]))
    with open(outputs[0], "rb") as f1, open(outputs[1], "rb") as f2:
        assert f1.read() == f2.read()
    assert load_checkpoint(str(tmp_path / "first.csv.json")).depth == 30


def test_benchmark_noiseless_is_exact(tmp_path):
    output = str(tmp_path / "bench.csv")
    cfg = parse_config({"mode": "benchmark", "code_lengths": [4, 6], "depth": 4, "epochs": 3, "trials": 1,
                        "clutter_power": 0.0, "noise_covariance": "scaled-identity 0", "output_path": output}, {})
    ExperimentOrchestrator(cfg, quiet=True).run()
    rows = read_rows(output)
    assert [(row["N"], row["method"]) for row in rows] == [
        ("4", "decor"), ("4", "dinkelbach"), ("4", "random"),
        ("6", "decor"), ("6", "dinkelbach"), ("6", "random"),
    ]
    for row in rows:
        assert float(row["mse"]) <= 1e-24
        assert row["trials"] == "1" and row["seed"] == "0"


def test_benchmark_is_deterministic(tmp_path, monkeypatch):
    from utils.config import Config

    contents = []
    for workers in (1, 3):
        monkeypatch.setattr(Config, "WORKERS", workers)
        monkeypatch.setattr(Config, "RESTARTS", 3)
        output = str(tmp_path / f"bench_{workers}.csv")
        cfg = parse_config({"mode": "benchmark", "code_lengths": [5, 8], "depth": 5, "epochs": 4,
                            "trials": 50, "seed": 9, "output_path": output}, {})
        ExperimentOrchestrator(cfg, quiet=True).run()
        with open(output, "rb") as f:
            contents.append(f.read())
    assert contents[0] == contents[1]


def test_pmli_design_writes_trace_and_code(tmp_path, monkeypatch):
    from utils.config import Config

    monkeypatch.setattr(Config, "RESTARTS", 2)
    output = str(tmp_path / "design.csv")
    assert main(["pmli-design", "--seed", "4", "--output", output, "--quiet"]) == EXIT_OK
    trace = [float(row["objective"]) for row in read_rows(output)]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(trace, trace[1:]))
    code_rows = read_rows(str(tmp_path / "design_code.csv"))
    assert len(code_rows) == 10
    for row in code_rows:
        assert abs(complex(float(row["re"]), float(row["im"]))) == pytest.approx(1.0)


def test_oracle_subcommand(tmp_path, monkeypatch):
    from utils.config import Config

    monkeypatch.setattr(Config, "RESTARTS", 5)
    monkeypatch.setattr(Config, "ORACLE_GRID_LEVELS", 8)
    config = write_config(tmp_path, f"mode: oracle\nn: 3\noutput_path: {tmp_path / 'oracle.csv'}\n")
    assert main(["oracle", "--config", config, "--quiet"]) == EXIT_OK
    (row,) = read_rows(str(tmp_path / "oracle.csv"))
    assert row["n"] == "3" and row["grid_levels"] == "8"
    assert float(row["grid_best_value"]) > 0


def test_cli_exit_codes(tmp_path):
    bad = write_config(tmp_path, "mode: train\nshrink: 1.5\n")
    assert main(["train", "--config", bad, "--quiet"]) == EXIT_CONFIG
    too_large = write_config(tmp_path, f"n: 8\noutput_path: {tmp_path / 'o.csv'}\n", name="large.yaml")
    assert main(["oracle", "--config", too_large, "--quiet"]) == EXIT_RUNTIME
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["train", "--output", str(blocker / "out.csv"), "--quiet"]) == EXIT_IO


def test_seed_override_reaches_trainer(tmp_path):
    cfg = load_config(write_config(tmp_path, "mode: train\nseed: 1\n")).with_overrides(seed=42)
    assert cfg.seed == 42 and cfg.trainer.seed == 42 and cfg.env.seed == 42


def test_depth_follows_trainer(tmp_path):
    cfg = load_config(write_config(tmp_path, "depth: 7\n"))
    assert cfg.depth == 7 and cfg.trainer.depth == 7
    assert ExperimentConfig(trainer=TrainerConfig(depth=4)).depth == 4


def test_unwritable_log_file_warns_once(tmp_path, capsys):
    cfg = parse_config({"mode": "train"}, {})
    log_file = str(tmp_path / "missing" / "run.log")
    orchestrator = ExperimentOrchestrator(cfg, log_file=log_file, quiet=True)
    orchestrator._log("first")
    orchestrator._log("second")
    err = capsys.readouterr().err
    assert err.count("[WARNING]") == 1 and log_file in err
    assert orchestrator.log_buffer.getvalue() == "first\nsecond\n"
