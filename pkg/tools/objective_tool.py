"""
Objective Tools - Shift matrices and the SINR-like design criterion

f(s) = |s^H y|^2 / sum_{k != 0} |s^H J_k y|^2 = (s^H A s) / (s^H B s)
with A = y y^H and B = sum_{k != 0} J_k A J_k^H, |k| <= N-1.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from tools.signal_model_tool import UnimodularCode
from utils.errors import DomainError, DegenerateDenominatorError, InvalidOffsetError

DENOMINATOR_FLOOR = 1e-30


@dataclass(frozen=True, eq=False)
class QuadraticPair:
    """A = y y^H (rank <= 1) and the clutter-shifted aggregate B"""

    A: np.ndarray
    B: np.ndarray

    @property
    def n(self) -> int:
        return int(self.A.shape[0])


def shift_matrix(n: int, k: int) -> np.ndarray:
    """
    Shift matrix J_k with [J_k]_{l,m} = 1 iff m - l = k.

    Raises:
        InvalidOffsetError: If |k| >= n
    """
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    if abs(k) >= n:
        raise InvalidOffsetError(f"shift offset {k} out of range for dimension {n}")
    return np.eye(n, k=k)


def shift_vector(y: np.ndarray, k: int) -> np.ndarray:
    """J_k y without forming J_k: (J_k y)_l = y_{l+k}, zero outside the support"""
    n = y.shape[0]
    if abs(k) >= n:
        raise InvalidOffsetError(f"shift offset {k} out of range for dimension {n}")
    out = np.zeros_like(y)
    if k >= 0:
        out[: n - k] = y[k:]
    else:
        out[-k:] = y[: n + k]
    return out


def clutter_offsets(n: int) -> range:
    """Offsets k with 0 < |k| <= n-1, in the order -(n-1), ..., n-1 (zero skipped by callers)"""
    return range(-(n - 1), n)


def build_quadratic_pair(y: np.ndarray) -> QuadraticPair:
    """
    Build A = y y^H and B = sum_{k != 0} (J_k y)(J_k y)^H.

    B is accumulated from outer products of shifted copies of y, which equals
    sum J_k A J_k^H without the O(N^3) triple products.
    """
    y = np.asarray(y, dtype=complex).reshape(-1)
    if y.size < 2:
        raise DomainError(f"received signal must have length >= 2, got {y.size}")
    A = np.outer(y, y.conj())
    B = np.zeros_like(A)
    for k in clutter_offsets(y.size):
        if k == 0:
            continue
        shifted = shift_vector(y, k)
        B += np.outer(shifted, shifted.conj())
    return QuadraticPair(A=A, B=B)


def quadratic_form(matrix: np.ndarray, s) -> float:
    """Real part of s^H M s"""
    entries = s.entries if isinstance(s, UnimodularCode) else np.asarray(s)
    return float(np.real(np.vdot(entries, matrix @ entries)))


def objective_terms(s: UnimodularCode, y: np.ndarray) -> Tuple[float, float]:
    """
    Numerator |s^H y|^2 and denominator sum_{k != 0} |s^H J_k y|^2.

    np.correlate(y, s, "full")[i] = s^H J_k y with lag k = i - (N-1).
    """
    y = np.asarray(y, dtype=complex).reshape(-1)
    if y.size != s.n:
        raise DomainError(f"dimension mismatch: code {s.n}, signal {y.size}")
    lags = np.correlate(y, s.entries, mode="full")
    power = np.abs(lags) ** 2
    center = s.n - 1
    numerator = float(power[center])
    denominator = float(np.sum(power[:center]) + np.sum(power[center + 1:]))
    return numerator, denominator


def sinr_objective(s: UnimodularCode, y: np.ndarray) -> float:
    """
    Evaluate f(s) for an observed echo y.

    Raises:
        DegenerateDenominatorError: If s^H B s <= 1e-30
    """
    numerator, denominator = objective_terms(s, y)
    if not denominator > DENOMINATOR_FLOOR:
        raise DegenerateDenominatorError(f"denominator s^H B s = {denominator:.3e} is at or below the floor")
    return numerator / denominator
