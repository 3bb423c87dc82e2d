"""
Data Saving Utilities - CSV result files and network checkpoints
"""

import csv
import json
import os
from typing import Dict, Iterable, List, Sequence

import numpy as np

from agents.decor_trainer_agent import EpochRecord
from tools.decor_tool import CHECKPOINT_FORMAT_VERSION, DecorParams
from tools.signal_model_tool import UnimodularCode
from utils.errors import OutputError

CSV_SCHEMA_VERSION = "decor-csv/1"

TRAINING_COLUMNS = ["epoch", "incumbent_value", "best_candidate_value", "accepted", "radius"]
BENCHMARK_COLUMNS = ["N", "method", "mse", "trials", "seed"]
TRACE_COLUMNS = ["iteration", "objective"]
ORACLE_COLUMNS = ["n", "grid_levels", "grid_best_value", "designed_value", "ratio"]
CODE_COLUMNS = ["index", "re", "im"]


def _ensure_parent(output_path: str) -> None:
    os.makedirs(os.path.dirname(output_path) if os.path.dirname(output_path) else '.', exist_ok=True)


def save_csv(rows: Iterable[Dict], fieldnames: Sequence[str], output_path: str, table: str) -> str:
    """
    Write rows to a CSV file whose first line is the schema comment.

    Args:
        rows: Row dictionaries keyed by fieldnames
        fieldnames: Column order
        output_path: Output file path
        table: Table name recorded next to the schema version

    Returns:
        The output path

    Raises:
        OutputError: If the file cannot be written
    """
    try:
        _ensure_parent(output_path)
        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            f.write(f"# {CSV_SCHEMA_VERSION} {table}\n")
            writer = csv.DictWriter(f, fieldnames=list(fieldnames), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    except OSError as e:
        raise OutputError(output_path, e.strerror or str(e))
    return output_path


def save_training_log(records: Sequence[EpochRecord], output_path: str) -> str:
    """One row per epoch, the t=0 incumbent first"""
    rows = [
        {
            "epoch": record.epoch,
            "incumbent_value": repr(float(record.incumbent_value)),
            "best_candidate_value": repr(float(record.best_candidate_value)),
            "accepted": record.accepted,
            "radius": repr(float(record.radius)),
        }
        for record in records
    ]
    return save_csv(rows, TRAINING_COLUMNS, output_path, "training")


def save_benchmark(rows: List[Dict], output_path: str) -> str:
    return save_csv(rows, BENCHMARK_COLUMNS, output_path, "benchmark")


def save_trace(trace: Sequence[float], output_path: str) -> str:
    rows = [{"iteration": i, "objective": repr(float(value))} for i, value in enumerate(trace)]
    return save_csv(rows, TRACE_COLUMNS, output_path, "pmli-design")


def save_oracle_summary(row: Dict, output_path: str) -> str:
    return save_csv([row], ORACLE_COLUMNS, output_path, "oracle")


def save_code(code: UnimodularCode, output_path: str) -> str:
    """Code entries as re/im column pairs"""
    rows = [
        {"index": i, "re": repr(float(value.real)), "im": repr(float(value.imag))}
        for i, value in enumerate(code.entries)
    ]
    return save_csv(rows, CODE_COLUMNS, output_path, "code")


def sidecar_path(output_path: str, suffix: str) -> str:
    """results.csv -> results_<suffix>.csv"""
    root, ext = os.path.splitext(output_path)
    return f"{root}_{suffix}{ext or '.csv'}"


def save_checkpoint(params: DecorParams, output_path: str) -> str:
    """
    Save network weights as JSON.

    Layout: metadata header (format_version, n, depth) followed by the layers
    in order, each flattened row-major into [re, im] pairs.
    """
    payload = {
        "metadata": {
            "format_version": CHECKPOINT_FORMAT_VERSION,
            "n": params.n,
            "depth": params.depth,
        },
        "layers": [
            np.stack([layer.real, layer.imag], axis=-1).reshape(-1, 2).tolist()
            for layer in params.layers
        ],
    }
    try:
        _ensure_parent(output_path)
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(payload, f)
    except OSError as e:
        raise OutputError(output_path, e.strerror or str(e))
    return output_path
