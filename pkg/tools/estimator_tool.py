"""
Estimator Tools - Matched-filter recovery of alpha_0 and MSE scoring
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from tools.signal_model_tool import EnvironmentConfig, UnimodularCode, build_code_matrix, transmit
from utils.errors import DomainError
from utils.seeding import Key, derive_rng


@dataclass(frozen=True)
class EstimationRecord:
    estimate: complex
    truth: complex
    squared_error: float

    @classmethod
    def from_pair(cls, estimate: complex, truth: complex) -> "EstimationRecord":
        return cls(estimate=complex(estimate), truth=complex(truth), squared_error=float(abs(estimate - truth) ** 2))


def matched_filter_estimate(s: UnimodularCode, y: np.ndarray) -> complex:
    """alpha_0 estimate s^H y / N (s^H s = N for a unimodular code)"""
    y = np.asarray(y, dtype=complex).reshape(-1)
    if y.size != s.n:
        raise DomainError(f"dimension mismatch: code {s.n}, signal {y.size}")
    return complex(np.vdot(s.entries, y) / s.n)


def mse(records: Sequence[EstimationRecord]) -> float:
    """Arithmetic mean of squared errors"""
    if len(records) == 0:
        raise DomainError("mse of an empty record list is undefined")
    return float(np.mean([record.squared_error for record in records]))


def run_trials(s: UnimodularCode, env: EnvironmentConfig, trials: int, seed_keys: Iterable[Key] = ()) -> List[EstimationRecord]:
    """
    Monte-Carlo estimation of alpha_0 with a fixed code.

    Trial t draws profile and noise from derive_rng(env.seed, *seed_keys, t),
    so each trial is reproducible on its own.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    keys = tuple(seed_keys)
    records = []
    for trial in range(trials):
        signal = transmit(s, env, derive_rng(env.seed, *keys, trial))
        records.append(EstimationRecord.from_pair(matched_filter_estimate(s, signal.y), signal.truth.target))
    return records


def expected_mse(s: UnimodularCode, env: EnvironmentConfig) -> float:
    """
    Closed-form E|alpha_0_hat - alpha_0|^2 for a code under the environment.

    (beta * sum_{k != 0} |s^H a_k|^2 + s^H Gamma s) / N^2, with a_k the
    clutter columns of A^H.
    """
    leakage = np.abs(build_code_matrix(s)[:, 1:].conj().T @ s.entries) ** 2
    noise = float(np.real(np.vdot(s.entries, env.noise_covariance @ s.entries)))
    return float((env.clutter_power * np.sum(leakage) + noise) / s.n ** 2)
