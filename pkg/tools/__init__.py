"""
Computational tools for DECoR waveform design
"""

# Environment simulation
from .signal_model_tool import (
    EnvironmentConfig,
    ReceivedSignal,
    ScatteringProfile,
    UnimodularCode,
    build_code_matrix,
    receive,
    sample_profile,
    transmit,
)

# Design criterion
from .objective_tool import QuadraticPair, build_quadratic_pair, shift_matrix, sinr_objective

# Model-based designer
from .uqp_solver_tool import (
    UqpMatrix,
    build_chi,
    design_with_restarts,
    dinkelbach_design,
    min_eigenvalue,
    pmli_solve,
    pmli_step,
)

# Unfolded network
from .decor_tool import DecorParams, activation, forward

# Estimation
from .estimator_tool import EstimationRecord, expected_mse, matched_filter_estimate, mse, run_trials

# Test oracle
from .oracle_tool import BruteForceResult, run_bruteforce_oracle

__all__ = [
    # Environment
    "EnvironmentConfig",
    "ReceivedSignal",
    "ScatteringProfile",
    "UnimodularCode",
    "build_code_matrix",
    "receive",
    "sample_profile",
    "transmit",
    # Objective
    "QuadraticPair",
    "build_quadratic_pair",
    "shift_matrix",
    "sinr_objective",
    # Designer
    "UqpMatrix",
    "build_chi",
    "design_with_restarts",
    "dinkelbach_design",
    "min_eigenvalue",
    "pmli_solve",
    "pmli_step",
    # Network
    "DecorParams",
    "activation",
    "forward",
    # Estimation
    "EstimationRecord",
    "expected_mse",
    "matched_filter_estimate",
    "mse",
    "run_trials",
    # Oracle
    "BruteForceResult",
    "run_bruteforce_oracle",
]
