"""
Experiment Orchestrator - Coordinates training, benchmarking and design runs
"""

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from io import StringIO
from typing import Dict, List, Optional, Sequence

import numpy as np

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from agents.decor_trainer_agent import EpochRecord, initial_code, run_training
from tools.decor_tool import forward
from tools.estimator_tool import mse, run_trials
from tools.oracle_tool import run_bruteforce_oracle
from tools.signal_model_tool import EnvironmentConfig, UnimodularCode, transmit
from tools.uqp_solver_tool import DinkelbachResult, design_with_restarts
from utils.config import MODES, Config, ExperimentConfig
from utils.data_loader import load_checkpoint, load_config, parse_config
from utils.data_saver import (
    save_benchmark,
    save_checkpoint,
    save_code,
    save_oracle_summary,
    save_trace,
    save_training_log,
    sidecar_path,
)
from utils.errors import ConfigError, DomainError, OutputError
from utils.seeding import derive_rng

BENCHMARK_METHODS = ("decor", "dinkelbach", "random")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4


class ExperimentOrchestrator:
    """Runs one configured experiment and writes its result files"""

    def __init__(self, cfg: ExperimentConfig, log_file: Optional[str] = None, quiet: bool = False):
        """
        Initialize the orchestrator

        Args:
            cfg: Validated experiment configuration
            log_file: Optional path to log file for output
            quiet: Suppress console output (the log file still receives it)
        """
        self.cfg = cfg
        self.log_file = log_file
        self.quiet = quiet
        self.log_buffer = StringIO()
        self._log_file_failed = False
        self.stats = {
            "epochs": 0,
            "accepted": 0,
            "rejected": 0,
            "cells": 0,
            "trials": 0,
        }

    def _log(self, message: str):
        """Log message to both console and log file"""
        if not self.quiet:
            print(message)
        self.log_buffer.write(message + "\n")
        if self.log_file and not self._log_file_failed:
            try:
                with open(self.log_file, 'a', encoding='utf-8') as f:
                    f.write(message + "\n")
            except OSError as e:
                # reported once; later messages go to the console only
                self._log_file_failed = True
                print(f"[WARNING] Could not write log file {self.log_file}: {e.strerror or e}", file=sys.stderr)

    def _probe(self, env: EnvironmentConfig, label: str) -> np.ndarray:
        """One transmission of the all-ones code, the observation the model-based designer works from"""
        return transmit(UnimodularCode.ones(env.n), env, derive_rng(self.cfg.seed, env.n, label)).y

    def _design(self, y: np.ndarray, label: str) -> DinkelbachResult:
        rng = derive_rng(self.cfg.seed, y.size, label, "restarts")
        return design_with_restarts(y, rng, restarts=Config.RESTARTS,
                                    outer_iters=Config.OUTER_ITERS, inner_iters=Config.INNER_ITERS)

    def run(self) -> str:
        """Dispatch on cfg.mode and return the main output path"""
        runners = {
            "train": self.run_training_experiment,
            "benchmark": self.run_mse_benchmark,
            "pmli-design": self.run_pmli_design,
            "oracle": self.run_oracle_check,
        }
        start_time = time.time()
        output = runners[self.cfg.mode]()
        self._log(f"[TIME] {self.cfg.mode} finished in {time.time() - start_time:.2f} seconds")
        return output

    def run_training_experiment(self) -> str:
        """
        Online-train DECoR and write one CSV row per epoch (t=0 row first).

        Returns:
            Path of the training CSV
        """
        env = self.cfg.env
        trainer = replace(self.cfg.trainer, seed=self.cfg.seed)
        self._log(f"\n{'='*80}")
        self._log(f"TRAINING DECoR: N={env.n}, L={trainer.depth}, B={trainer.candidates}, epochs={trainer.epochs}")
        self._log(f"{'='*80}")

        def on_epoch(record: EpochRecord):
            if record.epoch > 0:
                self.stats["epochs"] += 1
                self.stats["accepted" if record.accepted else "rejected"] += 1
            self._log(f"[{record.epoch}/{trainer.epochs}] f={record.incumbent_value:.6g} "
                      f"best candidate={record.best_candidate_value:.6g} "
                      f"{'accepted' if record.accepted else 'rejected'} radius={record.radius:.4g}")

        state = run_training(trainer, env, on_epoch)
        save_training_log(state.history, self.cfg.output_path)
        self._log(f"[OK] Saved {len(state.history)} epoch rows to {self.cfg.output_path}")

        if self.cfg.checkpoint_path:
            save_checkpoint(state.params, self.cfg.checkpoint_path)
            self._log(f"[OK] Saved checkpoint to {self.cfg.checkpoint_path}")

        self._print_summary()
        return self.cfg.output_path

    def _benchmark_codes(self, n: int) -> Dict[str, UnimodularCode]:
        env = self.cfg.environment(n)
        trainer = replace(self.cfg.trainer, seed=self.cfg.seed)
        codes = {}

        checkpoint = self.cfg.checkpoint_path
        if checkpoint and os.path.exists(checkpoint):
            params = load_checkpoint(checkpoint)
            if params.n == n:
                self._log(f"[INFO] N={n}: using trained network from {checkpoint}")
                codes["decor"] = forward(params, initial_code(trainer, n))
        if "decor" not in codes:
            codes["decor"] = run_training(trainer, env).incumbent_code

        codes["dinkelbach"] = self._design(self._probe(env, "dinkelbach-probe"), "dinkelbach").code
        codes["random"] = UnimodularCode.random_phase(n, derive_rng(self.cfg.seed, n, "random"))
        return codes

    def _benchmark_cell(self, n: int) -> List[Dict]:
        env = self.cfg.environment(n)
        rows = []
        for method, code in self._benchmark_codes(n).items():
            records = run_trials(code, env, self.cfg.trials, seed_keys=(n, method))
            value = mse(records)
            self._log(f"[OK] N={n} method={method} mse={value:.6g} ({self.cfg.trials} trials)")
            rows.append({
                "N": n,
                "method": method,
                "mse": repr(value),
                "trials": self.cfg.trials,
                "seed": self.cfg.seed,
            })
        return rows

    def run_mse_benchmark(self) -> str:
        """
        For every code length: train DECoR, design a Dinkelbach/PMLI code,
        draw a random code, and score each by matched-filter MSE of alpha_0.

        Returns:
            Path of the benchmark CSV
        """
        lengths = list(self.cfg.code_lengths)
        self._log(f"\n{'='*80}")
        self._log(f"MSE BENCHMARK: N in {lengths}, {self.cfg.trials} trials per method")
        self._log(f"{'='*80}")

        if Config.WORKERS > 1:
            with ThreadPoolExecutor(max_workers=Config.WORKERS) as pool:
                cells = list(pool.map(self._benchmark_cell, lengths))
        else:
            cells = [self._benchmark_cell(n) for n in lengths]

        rows = [row for cell in cells for row in cell]
        rows.sort(key=lambda row: (row["N"], BENCHMARK_METHODS.index(row["method"])))
        self.stats["cells"] = len(lengths)
        self.stats["trials"] = len(rows) * self.cfg.trials

        save_benchmark(rows, self.cfg.output_path)
        self._log(f"[OK] Saved {len(rows)} rows to {self.cfg.output_path}")
        self._print_summary()
        return self.cfg.output_path

    def run_pmli_design(self) -> str:
        """
        Model-based design from one observation: best-of-restarts
        Dinkelbach/PMLI. Writes the f trace and a _code sidecar.
        """
        env = self.cfg.env
        y = self._probe(env, "pmli-design-probe")
        result = self._design(y, "pmli-design")
        save_trace(result.f_trace, self.cfg.output_path)
        code_path = save_code(result.code, sidecar_path(self.cfg.output_path, "code"))
        self._log(f"[OK] N={env.n}: f went from {result.f_trace[0]:.6g} to {result.value:.6g}")
        self._log(f"[OK] Saved trace to {self.cfg.output_path} and code to {code_path}")
        return self.cfg.output_path

    def run_oracle_check(self) -> str:
        """
        Compare the best-of-restarts design with the grid-exhaustive optimum
        for one observation (small N only).
        """
        env = self.cfg.env
        levels = Config.ORACLE_GRID_LEVELS
        y = self._probe(env, "oracle-probe")
        oracle = run_bruteforce_oracle(env.n, levels, y)
        designed = self._design(y, "oracle")
        ratio = designed.value / oracle.best_value
        save_oracle_summary({
            "n": env.n,
            "grid_levels": levels,
            "grid_best_value": repr(oracle.best_value),
            "designed_value": repr(designed.value),
            "ratio": repr(ratio),
        }, self.cfg.output_path)
        code_path = save_code(oracle.best_code, sidecar_path(self.cfg.output_path, "code"))
        self._log(f"[OK] grid optimum {oracle.best_value:.6g}, designed {designed.value:.6g} (ratio {ratio:.4f})")
        self._log(f"[OK] Saved summary to {self.cfg.output_path} and grid code to {code_path}")
        return self.cfg.output_path

    def _print_summary(self):
        """Print run summary"""
        self._log(f"\n{'='*80}")
        self._log("RUN SUMMARY")
        self._log(f"{'='*80}")
        if self.stats["epochs"]:
            self._log(f"Epochs: {self.stats['epochs']}")
            self._log(f"Accepted: {self.stats['accepted']} ({self.stats['accepted']/self.stats['epochs']*100:.1f}%)")
            self._log(f"Rejected: {self.stats['rejected']} ({self.stats['rejected']/self.stats['epochs']*100:.1f}%)")
        if self.stats["cells"]:
            self._log(f"Code lengths: {self.stats['cells']}")
            self._log(f"Monte-Carlo trials: {self.stats['trials']}")
        self._log(f"{'='*80}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function for command-line usage; returns the process exit code"""
    parser = argparse.ArgumentParser(
        description="Design and evaluate unimodular radar codes with DECoR and PMLI"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for mode in MODES:
        sub = subparsers.add_parser(mode, help=f"Run the {mode} experiment")
        sub.add_argument("--config", help="YAML experiment configuration")
        sub.add_argument("--seed", type=int, help="Master seed (overrides the config file)")
        sub.add_argument("--output", help="Output CSV path (overrides the config file)")
        sub.add_argument("--quiet", action="store_true", help="Suppress console output")

    args = parser.parse_args(argv)

    try:
        Config.validate()
        cfg = load_config(args.config) if args.config else parse_config({"mode": args.command}, {})
        cfg = cfg.with_overrides(mode=args.command, seed=args.seed, output_path=args.output)
    except ConfigError as e:
        print(f"[ERROR] Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    orchestrator = ExperimentOrchestrator(cfg, log_file=Config.LOG_FILE, quiet=args.quiet)
    try:
        orchestrator.run()
    except OutputError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as e:
        print(f"[ERROR] Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, np.linalg.LinAlgError, FloatingPointError) as e:
        print(f"[ERROR] Numerical error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(f"[ERROR] I/O error: {e}", file=sys.stderr)
        return EXIT_IO

    orchestrator._log(f"\n[COMPLETE] {cfg.mode} finished!")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
