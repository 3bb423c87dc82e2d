"""
DECoR Trainer Agent - Online random-walk learning of the network weights

The agent transmits the codes produced by perturbed copies of its network,
scores each echo with f(s), and keeps the best perturbation when it does
not lose to the incumbent. Perturbations are Hermitian PSD matrices L L^H,
so the weights walk inside the positive-definite cone.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple

import numpy as np

from tools.decor_tool import DecorParams, forward
from tools.objective_tool import sinr_objective
from tools.signal_model_tool import EnvironmentConfig, UnimodularCode, complex_normal, transmit
from utils.errors import DegenerateDenominatorError, DomainError
from utils.seeding import derive_rng

S0_POLICIES = ("all-ones", "random-phase")

# Per-(epoch, candidate) random streams
STREAM_DIRECTIONS = 0
STREAM_ENVIRONMENT = 1
STREAM_START = 2


@dataclass(frozen=True)
class TrainerConfig:
    """Random-walk settings: B candidates, radius c, shrink factor delta"""

    candidates: int = 8
    radius_init: float = 0.1
    shrink: float = 0.9
    epochs: int = 50
    seed: int = 0
    s0_policy: str = "all-ones"
    depth: int = 30
    workers: int = 1

    def __post_init__(self):
        if self.candidates < 1:
            raise DomainError(f"candidates must be >= 1, got {self.candidates}")
        if not self.radius_init > 0:
            raise DomainError(f"radius_init must be positive, got {self.radius_init}")
        if not 0 < self.shrink <= 1:
            raise DomainError(f"shrink must lie in (0, 1], got {self.shrink}")
        if self.epochs < 0:
            raise DomainError(f"epochs must be >= 0, got {self.epochs}")
        if self.depth < 1:
            raise DomainError(f"depth must be >= 1, got {self.depth}")
        if self.s0_policy not in S0_POLICIES:
            raise DomainError(f"s0_policy must be one of {S0_POLICIES}, got {self.s0_policy!r}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class EpochRecord:
    """One row of the training log"""

    epoch: int
    incumbent_value: float
    best_candidate_value: float
    accepted: int
    radius: float


@dataclass(frozen=True, eq=False)
class TrainerState:
    params: DecorParams
    s0: UnimodularCode
    incumbent_code: UnimodularCode
    incumbent_value: float
    radius: float
    epoch: int
    seed: int
    history: Tuple[EpochRecord, ...] = field(default=())


def sample_direction(n: int, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """
    Hermitian PSD search direction D = L L^H.

    L is lower triangular with independent CN(0, sigma) entries on and
    below the diagonal; sigma is the per-entry variance.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    lower = np.tril(complex_normal(rng, (n, n), sigma))
    direction = lower @ lower.conj().T
    return (direction + direction.conj().T) / 2.0


def propose_candidates(state: TrainerState, cfg: TrainerConfig, zero_directions: bool = False) -> List[DecorParams]:
    """
    Build B candidate parameter sets, each adding a fresh direction to every layer.

    Candidate i of epoch t draws from derive_rng(seed, t, i, STREAM_DIRECTIONS).
    zero_directions replaces every direction with zeros (debug hook).
    """
    epoch = state.epoch + 1
    n = state.params.n
    candidates = []
    for index in range(cfg.candidates):
        if zero_directions:
            directions = [np.zeros((n, n), dtype=complex) for _ in range(state.params.depth)]
        else:
            rng = derive_rng(state.seed, epoch, index, STREAM_DIRECTIONS)
            directions = [sample_direction(n, state.radius, rng) for _ in range(state.params.depth)]
        candidates.append(state.params.perturbed(directions))
    return candidates


def evaluate_candidate(params: DecorParams, s0: UnimodularCode, env: EnvironmentConfig,
                       rng: np.random.Generator) -> Tuple[UnimodularCode, float]:
    """
    Transmit the network's code once and score the echo.

    Returns:
        (code, f) with f = -inf when the denominator is degenerate
    """
    code = forward(params, s0)
    signal = transmit(code, env, rng)
    try:
        value = sinr_objective(code, signal.y)
    except DegenerateDenominatorError:
        value = -np.inf
    return code, value


def initial_code(cfg: TrainerConfig, n: int) -> UnimodularCode:
    """Network input s0 for the configured policy"""
    if cfg.s0_policy == "random-phase":
        return UnimodularCode.random_phase(n, derive_rng(cfg.seed, 0, 0, STREAM_START))
    return UnimodularCode.ones(n)


def initialize(cfg: TrainerConfig, env: EnvironmentConfig) -> TrainerState:
    """
    Identity weights, the chosen s0, and an incumbent from one evaluation
    of the initial network against one environment draw.
    """
    params = DecorParams.identity(env.n, cfg.depth)
    s0 = initial_code(cfg, env.n)
    code, value = evaluate_candidate(params, s0, env, derive_rng(cfg.seed, 0, 0, STREAM_ENVIRONMENT))
    record = EpochRecord(epoch=0, incumbent_value=value, best_candidate_value=value, accepted=1, radius=cfg.radius_init)
    return TrainerState(
        params=params,
        s0=s0,
        incumbent_code=code,
        incumbent_value=value,
        radius=cfg.radius_init,
        epoch=0,
        seed=cfg.seed,
        history=(record,),
    )


def train_epoch(state: TrainerState, cfg: TrainerConfig, env: EnvironmentConfig) -> TrainerState:
    """
    One random-walk step: propose, transmit, score, accept or shrink.

    The best candidate replaces the incumbent when its f is at least the
    incumbent value, and the radius is reset to radius_init; otherwise the
    weights stay and the radius is multiplied by shrink.
    """
    epoch = state.epoch + 1
    candidates = propose_candidates(state, cfg)

    def score(index: int) -> Tuple[UnimodularCode, float]:
        rng = derive_rng(state.seed, epoch, index, STREAM_ENVIRONMENT)
        return evaluate_candidate(candidates[index], state.s0, env, rng)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(score, range(len(candidates))))
    else:
        results = [score(index) for index in range(len(candidates))]

    values = np.array([value for _, value in results])
    best = int(np.argmax(values))
    best_value = float(values[best])

    if np.isfinite(best_value) and best_value >= state.incumbent_value:
        updated = replace(
            state,
            params=candidates[best],
            incumbent_code=results[best][0],
            incumbent_value=best_value,
            radius=cfg.radius_init,
            epoch=epoch,
        )
        accepted = 1
    else:
        updated = replace(state, radius=state.radius * cfg.shrink, epoch=epoch)
        accepted = 0

    record = EpochRecord(
        epoch=epoch,
        incumbent_value=updated.incumbent_value,
        best_candidate_value=best_value,
        accepted=accepted,
        radius=updated.radius,
    )
    return replace(updated, history=state.history + (record,))


def run_training(cfg: TrainerConfig, env: EnvironmentConfig,
                 on_epoch: Optional[Callable[[EpochRecord], None]] = None) -> TrainerState:
    """Initialize and run cfg.epochs epochs, calling on_epoch after each record"""
    state = initialize(cfg, env)
    if on_epoch:
        on_epoch(state.history[-1])
    for _ in range(cfg.epochs):
        state = train_epoch(state, cfg, env)
        if on_epoch:
            on_epoch(state.history[-1])
    return state
