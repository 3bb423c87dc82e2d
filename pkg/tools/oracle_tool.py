"""
Oracle Tools - Exhaustive phase-grid search for small codes

Used as a reference optimum when checking the model-based designer.
"""

from dataclasses import dataclass

import numpy as np

from tools.objective_tool import DENOMINATOR_FLOOR, clutter_offsets, shift_vector
from tools.signal_model_tool import UnimodularCode
from utils.errors import DomainError, GridTooLargeError

MAX_ORACLE_LENGTH = 5
MAX_GRID_LEVELS = 16
MAX_GRID_POINTS = 10 ** 7


@dataclass(frozen=True, eq=False)
class BruteForceResult:
    best_code: UnimodularCode
    best_value: float
    grid_levels: int
    phase_indices: np.ndarray
    values: np.ndarray


def grid_codes(n: int, q: int) -> np.ndarray:
    """
    Every code with phases on {2 pi k / q}, first phase fixed to 0.

    Returns:
        (q^(n-1), n) array of phase indices, lexicographic order
    """
    tail = np.indices((q,) * (n - 1)).reshape(n - 1, -1).T
    return np.hstack([np.zeros((tail.shape[0], 1), dtype=int), tail])


def run_bruteforce_oracle(n: int, q: int, y: np.ndarray) -> BruteForceResult:
    """
    Evaluate f over the full quantized grid and return the best point.

    Args:
        n: Code length (2..5)
        q: Grid levels (1..16)
        y: Observed echo of length n

    Returns:
        BruteForceResult; grid points with a degenerate denominator score -inf

    Raises:
        GridTooLargeError: If n or q exceed the enumeration limits
        DomainError: If y has the wrong length or no grid point is defined
    """
    if not 2 <= n <= MAX_ORACLE_LENGTH or not 1 <= q <= MAX_GRID_LEVELS or q ** (n - 1) > MAX_GRID_POINTS:
        raise GridTooLargeError(f"grid n={n}, q={q} exceeds the enumeration limit")
    y = np.asarray(y, dtype=complex).reshape(-1)
    if y.size != n:
        raise DomainError(f"dimension mismatch: n={n}, signal {y.size}")

    indices = grid_codes(n, q)
    codes = np.exp(2j * np.pi * indices / q)
    numerator = np.abs(codes.conj() @ y) ** 2
    denominator = np.zeros_like(numerator)
    for k in clutter_offsets(n):
        if k != 0:
            denominator += np.abs(codes.conj() @ shift_vector(y, k)) ** 2

    values = np.full(numerator.shape, -np.inf)
    defined = denominator > DENOMINATOR_FLOOR
    if not np.any(defined):
        raise DomainError("every grid point has a degenerate denominator")
    values[defined] = numerator[defined] / denominator[defined]

    best = int(np.argmax(values))
    return BruteForceResult(
        best_code=UnimodularCode(codes[best]),
        best_value=float(values[best]),
        grid_levels=q,
        phase_indices=indices,
        values=values,
    )
