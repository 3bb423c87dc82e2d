"""
Tests for matched-filter estimation and MSE scoring
"""

import numpy as np
import pytest

from agents.decor_trainer_agent import TrainerConfig, run_training

from tools.estimator_tool import EstimationRecord, expected_mse, matched_filter_estimate, mse, run_trials
from tools.signal_model_tool import EnvironmentConfig, UnimodularCode, transmit
from utils.errors import DomainError


def test_clean_channel_examples(rng):
    s = UnimodularCode.random_phase(7, rng)
    assert matched_filter_estimate(s, s.entries) == pytest.approx(1.0, abs=1e-14)
    assert matched_filter_estimate(s, (2 + 1j) * s.entries) == pytest.approx(2 + 1j, abs=1e-14)


def test_noiseless_clutter_free_recovery_is_exact():
    """100 random draws with beta=0 and Gamma=0"""
    rng = np.random.default_rng(17)
    env = EnvironmentConfig(n=12, clutter_power=0.0, noise_covariance=np.zeros((12, 12)))
    for _ in range(100):
        s = UnimodularCode.random_phase(12, rng)
        signal = transmit(s, env, rng)
        assert abs(matched_filter_estimate(s, signal.y) - signal.truth.target) <= 1e-12


def test_estimator_is_unbiased():
    """beta=1, Gamma=I, N=50, 10^4 trials: |bias| within 3 standard errors"""
    env = EnvironmentConfig(n=50, clutter_power=1.0, seed=4)
    s = UnimodularCode.random_phase(50, np.random.default_rng(1))
    errors = np.array([r.estimate - r.truth for r in run_trials(s, env, 10_000, seed_keys=("bias",))])
    standard_error = np.sqrt(np.mean(np.abs(errors - errors.mean()) ** 2) / errors.size)
    assert abs(errors.mean()) <= 3 * standard_error


def test_scale_and_phase_equivariance(rng):
    s = UnimodularCode.random_phase(9, rng)
    y = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    c, theta = -0.4 + 2.0j, 1.1
    assert matched_filter_estimate(s, c * y) == pytest.approx(c * matched_filter_estimate(s, y), rel=1e-12)
    rotated = UnimodularCode(np.exp(1j * theta) * s.entries)
    assert matched_filter_estimate(rotated, y) == pytest.approx(
        np.exp(-1j * theta) * matched_filter_estimate(s, y), rel=1e-12)


def test_record_squared_error():
    record = EstimationRecord.from_pair(1 + 2j, 0.5 - 1j)
    assert record.squared_error == pytest.approx(abs(0.5 + 3j) ** 2, abs=1e-12)


def test_mse_examples():
    assert mse([EstimationRecord.from_pair(1 + 1j, 1 + 1j)]) == 0.0
    records = [EstimationRecord(0j, 0j, 1.0), EstimationRecord(0j, 0j, 3.0)]
    assert mse(records) == 2.0


def test_mse_rejects_empty():
    with pytest.raises(DomainError):
        mse([])


def test_monte_carlo_mse_matches_closed_form():
    """Empirical MSE of a fixed code agrees with (beta * sidelobe energy + s^H Gamma s) / N^2"""
    env = EnvironmentConfig(n=10, clutter_power=1.0, seed=2)
    s = UnimodularCode.random_phase(10, np.random.default_rng(3))
    empirical = mse(run_trials(s, env, 4000, seed_keys=("closed-form",)))
    assert empirical == pytest.approx(expected_mse(s, env), rel=0.1)


def test_all_ones_code_leaks_more_clutter_than_random_codes():
    env = EnvironmentConfig(n=25, clutter_power=1.0)
    rng = np.random.default_rng(8)
    random_average = np.mean([expected_mse(UnimodularCode.random_phase(25, rng), env) for _ in range(200)])
    # E|r_k|^2 = N - |k| for random phases, so the expected MSE is (beta (N-1) + 1) / N
    assert random_average == pytest.approx((25 - 1 + 1) / 25, rel=0.1)
    assert expected_mse(UnimodularCode.ones(25), env) > 5 * random_average


def test_run_trials_is_reproducible():
    env = EnvironmentConfig(n=5, seed=11)
    s = UnimodularCode.ones(5)
    first = run_trials(s, env, 20, seed_keys=(5, "decor"))
    second = run_trials(s, env, 20, seed_keys=(5, "decor"))
    assert first == second
    other = run_trials(s, env, 20, seed_keys=(5, "random"))
    assert first != other


@pytest.mark.parametrize("n", [10, 25, 50])
def test_trained_codes_leak_less_clutter_than_start_code(n):
    """Closed-form MSE of the trained incumbent vs. the all-ones network input, seeds 1-3"""
    improved = 0
    for seed in (1, 2, 3):
        env = EnvironmentConfig(n=n, seed=seed)
        state = run_training(TrainerConfig(seed=seed), env)
        trained = expected_mse(state.incumbent_code, env)
        start = expected_mse(UnimodularCode.ones(n), env)
        # noise alone contributes s^H s / N^2 = 1/N
        assert trained >= 1.0 / n * (1 - 1e-9)
        assert np.isfinite(trained)
        if trained < 0.5 * start:
            improved += 1
    assert improved >= 2
