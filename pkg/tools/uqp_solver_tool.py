"""
UQP Solver Tools - Model-based waveform design

Dinkelbach-style fractional programming turns max f(s) into a sequence of
unimodular quadratic programs max s^H chi s, each attacked with
power-method-like iterations s <- exp(j arg(chi s)).
"""

from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
from scipy.linalg import eigvalsh

from tools.objective_tool import QuadraticPair, build_quadratic_pair, sinr_objective
from tools.signal_model_tool import UnimodularCode
from utils.errors import DomainError

HERMITIAN_INPUT_TOL = 1e-10
CHI_HERMITIAN_TOL = 1e-12
CHI_PSD_TOL = 1e-8
LOADING_PAD_SCALE = 1e-8
ZERO_MAGNITUDE = 1e-300

DEFAULT_INNER_ITERS = 30
DEFAULT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class UqpMatrix:
    """Diagonally loaded matrix chi = chi_tilde + loading * I"""

    chi: np.ndarray
    loading: float

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=complex)
        if chi.ndim != 2 or chi.shape[0] != chi.shape[1]:
            raise DomainError(f"chi must be square, got shape {chi.shape}")
        if np.max(np.abs(chi - chi.conj().T)) > CHI_HERMITIAN_TOL * max(1.0, np.max(np.abs(chi))):
            raise DomainError("chi is not Hermitian")
        if self.loading < 0:
            raise DomainError(f"loading must be non-negative, got {self.loading}")
        object.__setattr__(self, "chi", chi)

    @property
    def n(self) -> int:
        return int(self.chi.shape[0])


@dataclass(frozen=True, eq=False)
class PmliResult:
    code: UnimodularCode
    iterations: int
    trace: np.ndarray


@dataclass(frozen=True, eq=False)
class DinkelbachResult:
    code: UnimodularCode
    f_trace: np.ndarray

    @property
    def value(self) -> float:
        return float(self.f_trace[-1])


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2.0


def _as_matrix(chi: Union[UqpMatrix, np.ndarray]) -> np.ndarray:
    return chi.chi if isinstance(chi, UqpMatrix) else np.asarray(chi, dtype=complex)


def min_eigenvalue(H: np.ndarray) -> float:
    """
    Smallest eigenvalue of a Hermitian matrix.

    Raises:
        DomainError: If H is not square or not Hermitian within 1e-10
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {H.shape}")
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_INPUT_TOL * max(1.0, np.max(np.abs(H))):
        raise DomainError("matrix is not Hermitian")
    return float(eigvalsh(_hermitize(H), subset_by_index=[0, 0])[0])


def build_chi(pair: QuadraticPair, f_star: float) -> UqpMatrix:
    """
    Form chi_tilde = A - f_star * B and load its diagonal until it is PSD.

    loading = max(0, -lambda_min(chi_tilde)) + 1e-8 * max(1, ||chi_tilde||_F)

    Args:
        pair: Quadratic forms of the current echo
        f_star: Objective value of the current code

    Returns:
        UqpMatrix with the loaded chi
    """
    if not f_star >= 0:
        raise DomainError(f"f_star must be non-negative, got {f_star}")
    chi_tilde = _hermitize(pair.A - f_star * pair.B)
    pad = LOADING_PAD_SCALE * max(1.0, float(np.linalg.norm(chi_tilde, "fro")))
    loading = max(0.0, -min_eigenvalue(chi_tilde)) + pad
    chi = chi_tilde + loading * np.eye(pair.n)
    return UqpMatrix(chi=chi, loading=loading)


def unimodular_projection(u: np.ndarray) -> np.ndarray:
    """
    Entrywise exp(j arg(u)); entries with |u_k| <= 1e-300 map to 1.

    Shared by the PMLI update and the DECoR activation so both follow the
    same arithmetic.
    """
    u = np.asarray(u, dtype=complex)
    magnitude = np.abs(u)
    out = np.ones_like(u)
    live = magnitude > ZERO_MAGNITUDE
    out[live] = u[live] / magnitude[live]
    return out


def layer_update(matrix: np.ndarray, entries: np.ndarray) -> np.ndarray:
    """One power-method-like update on raw arrays: S(matrix @ entries)"""
    return unimodular_projection(matrix @ entries)


def pmli_step(chi: Union[UqpMatrix, np.ndarray], s: UnimodularCode) -> UnimodularCode:
    """Single power-method-like iteration s' = exp(j arg(chi s))"""
    matrix = _as_matrix(chi)
    if matrix.shape != (s.n, s.n):
        raise DomainError(f"dimension mismatch: chi {matrix.shape}, code {s.n}")
    return UnimodularCode(layer_update(matrix, s.entries))


def pmli_solve(chi: Union[UqpMatrix, np.ndarray], s0: UnimodularCode,
               max_iters: int = DEFAULT_INNER_ITERS, tol: float = DEFAULT_TOL) -> PmliResult:
    """
    Iterate pmli_step until the relative change of s^H chi s drops below tol.

    Args:
        chi: PSD matrix of the UQP
        s0: Starting code
        max_iters: Iteration cap (>= 1)
        tol: Relative objective change that stops the loop; 0 runs all max_iters

    Returns:
        PmliResult with the final code, iterations run and the per-iterate
        objective trace (non-decreasing for PSD chi)
    """
    if max_iters < 1:
        raise DomainError(f"max_iters must be >= 1, got {max_iters}")
    matrix = _as_matrix(chi)
    if matrix.shape != (s0.n, s0.n):
        raise DomainError(f"dimension mismatch: chi {matrix.shape}, code {s0.n}")

    entries = s0.entries
    previous = float(np.real(np.vdot(entries, matrix @ entries)))
    trace: List[float] = []
    iterations = 0
    for iterations in range(1, max_iters + 1):
        entries = layer_update(matrix, entries)
        value = float(np.real(np.vdot(entries, matrix @ entries)))
        trace.append(value)
        if abs(value - previous) < tol * max(abs(previous), ZERO_MAGNITUDE):
            break
        previous = value
    return PmliResult(code=UnimodularCode(entries), iterations=iterations, trace=np.array(trace))


def dinkelbach_design(y: np.ndarray, s0: UnimodularCode, outer_iters: int = 20,
                      inner_iters: int = DEFAULT_INNER_ITERS, inner_tol: float = 0.0) -> DinkelbachResult:
    """
    Maximize f(s) for an observed echo by fractional programming.

    Each outer step sets f_star = f(s), builds the loaded chi for
    A - f_star B and runs inner_iters PMLI steps from s. A new code never
    lowers f; if rounding ever makes it do so the current code is kept.

    Args:
        y: Observed echo
        s0: Starting code (f(s0) must be defined)
        outer_iters: Number of fractional-programming steps
        inner_iters: PMLI steps per outer step
        inner_tol: Early-stop tolerance for the inner loop

    Returns:
        DinkelbachResult with the final code and f_trace (f(s0) first)

    Raises:
        DegenerateDenominatorError: If f(s0) is undefined
    """
    pair = build_quadratic_pair(y)
    code = s0
    f_current = sinr_objective(code, y)
    f_trace = [f_current]
    for _ in range(outer_iters):
        chi = build_chi(pair, f_current)
        candidate = pmli_solve(chi, code, max_iters=inner_iters, tol=inner_tol).code
        f_candidate = sinr_objective(candidate, y)
        if f_candidate >= f_current:
            code, f_current = candidate, f_candidate
        f_trace.append(f_current)
    return DinkelbachResult(code=code, f_trace=np.array(f_trace))


def design_with_restarts(y: np.ndarray, rng: np.random.Generator, restarts: int = 20,
                         outer_iters: int = 20, inner_iters: int = DEFAULT_INNER_ITERS,
                         first_start: Optional[UnimodularCode] = None) -> DinkelbachResult:
    """
    Best of several dinkelbach_design runs.

    The first run starts from `first_start` (all-ones by default), the rest
    from random-phase codes drawn from rng.
    """
    if restarts < 1:
        raise DomainError(f"restarts must be >= 1, got {restarts}")
    n = np.asarray(y).reshape(-1).size
    starts = [first_start or UnimodularCode.ones(n)]
    starts += [UnimodularCode.random_phase(n, rng) for _ in range(restarts - 1)]

    best: Optional[DinkelbachResult] = None
    for start in starts:
        result = dinkelbach_design(y, start, outer_iters=outer_iters, inner_iters=inner_iters)
        if best is None or result.value > best.value:
            best = result
    return best
