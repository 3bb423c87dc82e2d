"""
Signal Model Tools - Simulated range-cell echo environment

y = A^H alpha + eps, where A^H is built from the transmit code, alpha holds
the reflectivity of the cell under test (alpha_0) and of the 2N-2 adjacent
cells, and eps is circular complex Gaussian noise with covariance Gamma.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from utils.errors import DomainError

UNIT_MODULUS_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


def complex_normal(rng: np.random.Generator, size, variance=1.0) -> np.ndarray:
    """
    Draw circular complex Gaussian samples CN(0, variance).

    Real and imaginary parts are independent, each with variance variance/2.
    `variance` may be a scalar or an array broadcastable to `size`.
    """
    parts = rng.standard_normal((2,) + tuple(np.atleast_1d(size)))
    scale = np.sqrt(np.asarray(variance, dtype=float) / 2.0)
    return scale * (parts[0] + 1j * parts[1])


@dataclass(frozen=True, eq=False)
class UnimodularCode:
    """Transmit sequence s with |s_k| = 1"""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex).reshape(-1)
        if entries.size < 2:
            raise DomainError(f"code length must be at least 2, got {entries.size}")
        deviation = np.max(np.abs(np.abs(entries) - 1.0))
        if not deviation <= UNIT_MODULUS_TOL:
            raise DomainError(f"code entries are not unit modulus (max deviation {deviation:.3e})")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return int(self.entries.size)

    @classmethod
    def ones(cls, n: int) -> "UnimodularCode":
        return cls(np.ones(n, dtype=complex))

    @classmethod
    def from_phases(cls, phases) -> "UnimodularCode":
        return cls(np.exp(1j * np.asarray(phases, dtype=float)))

    @classmethod
    def random_phase(cls, n: int, rng: np.random.Generator) -> "UnimodularCode":
        return cls.from_phases(rng.uniform(0.0, 2.0 * np.pi, size=n))


@dataclass(frozen=True, eq=False)
class ScatteringProfile:
    """alpha ordered [a_0, a_1, ..., a_{N-1}, a_{-N+1}, ..., a_{-1}]"""

    alpha: np.ndarray

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=complex).reshape(-1)
        if alpha.size < 3 or alpha.size % 2 == 0:
            raise DomainError(f"profile length must be 2N-1 with N >= 2, got {alpha.size}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def n(self) -> int:
        return (self.alpha.size + 1) // 2

    @property
    def target(self) -> complex:
        return complex(self.alpha[0])


@dataclass(frozen=True, eq=False)
class EnvironmentConfig:
    """
    Radar environment: code length, clutter power (beta), target power,
    noise covariance (Gamma) and seed.

    Gamma defaults to the identity. A square-root factor F with F F^H = Gamma
    is computed once at construction and used for every noise draw.
    """

    n: int
    clutter_power: float = 1.0
    target_power: float = 1.0
    noise_covariance: Optional[np.ndarray] = None
    seed: int = 0
    noise_factor: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.n) < 2:
            raise DomainError(f"code length must be at least 2, got {self.n}")
        if self.clutter_power < 0 or self.target_power < 0:
            raise DomainError("clutter_power and target_power must be non-negative")
        if int(self.seed) < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")

        gamma = np.eye(self.n, dtype=complex) if self.noise_covariance is None else np.array(self.noise_covariance, dtype=complex)
        if gamma.shape != (self.n, self.n):
            raise DomainError(f"noise covariance must be {self.n}x{self.n}, got {gamma.shape}")
        if np.max(np.abs(gamma - gamma.conj().T)) > HERMITIAN_TOL:
            raise DomainError("noise covariance is not Hermitian")
        eigenvalues, eigenvectors = np.linalg.eigh(gamma)
        if eigenvalues[0] < -PSD_TOL:
            raise DomainError(f"noise covariance is not PSD (min eigenvalue {eigenvalues[0]:.3e})")

        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "noise_covariance", gamma)
        object.__setattr__(self, "noise_factor", eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None)))


@dataclass(frozen=True, eq=False)
class ReceivedSignal:
    """Echo y together with the alpha realization that produced it"""

    y: np.ndarray
    truth: ScatteringProfile


def build_code_matrix(s: UnimodularCode) -> np.ndarray:
    """
    Build the N x (2N-1) matrix A^H for a transmit code.

    Column k (0 <= k <= N-1) is s delayed by k samples with zero fill above;
    column N-1+m (1 <= m <= N-1) belongs to alpha_{-(N-m)} and carries
    s_{N-m+1}, ..., s_N in its first m rows.

    Args:
        s: Transmit code

    Returns:
        Complex matrix of shape (N, 2N-1)
    """
    n = s.n
    entries = s.entries
    matrix = np.zeros((n, 2 * n - 1), dtype=complex)
    for k in range(n):
        matrix[k:, k] = entries[: n - k]
    for m in range(1, n):
        matrix[:m, n - 1 + m] = entries[n - m:]
    return matrix


def sample_profile(cfg: EnvironmentConfig, rng: np.random.Generator) -> ScatteringProfile:
    """
    Draw a scattering profile: alpha_0 ~ CN(0, target_power), every clutter
    coefficient ~ CN(0, clutter_power), all independent.
    """
    variances = np.full(2 * cfg.n - 1, float(cfg.clutter_power))
    variances[0] = float(cfg.target_power)
    return ScatteringProfile(complex_normal(rng, 2 * cfg.n - 1, variances))


def receive(s: UnimodularCode, profile: ScatteringProfile, cfg: EnvironmentConfig,
            rng: np.random.Generator) -> ReceivedSignal:
    """
    Generate the echo of `s` for a given profile plus a fresh noise draw.

    Args:
        s: Transmit code
        profile: Scattering coefficients, length 2N-1
        cfg: Environment (noise covariance)
        rng: Generator for the noise draw

    Returns:
        ReceivedSignal with y = A^H alpha + eps
    """
    if s.n != cfg.n or profile.n != cfg.n:
        raise DomainError(f"dimension mismatch: code {s.n}, profile {profile.n}, environment {cfg.n}")
    noise = cfg.noise_factor @ complex_normal(rng, cfg.n)
    y = build_code_matrix(s) @ profile.alpha + noise
    return ReceivedSignal(y=y, truth=profile)


def transmit(s: UnimodularCode, cfg: EnvironmentConfig, rng: np.random.Generator) -> ReceivedSignal:
    """One transmission into the live environment: fresh profile, fresh noise"""
    return receive(s, sample_profile(cfg, rng), cfg, rng)
