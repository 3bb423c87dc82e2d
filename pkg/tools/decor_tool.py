"""
DECoR Network Tools - Unfolded power-method-like iterations

Layer i maps z to S(chi_i z) with S(x) = exp(j arg(x)); the network output
is s_L = g_{L-1}( ... g_0(s_0)). Each chi_i is Hermitian positive definite.
"""

from typing import List, Sequence

import numpy as np
from scipy.linalg import eigvalsh

from tools.signal_model_tool import UnimodularCode
from tools.uqp_solver_tool import layer_update, unimodular_projection
from utils.errors import DomainError

LAYER_HERMITIAN_TOL = 1e-12
LAYER_PD_SCALE = 1e-12
CHECKPOINT_FORMAT_VERSION = 1


class DecorParams:
    """
    Immutable set of layer matrices Omega = {chi_0, ..., chi_{L-1}}.

    Layers are checked for Hermitian symmetry and positive definiteness at
    construction. The trainer builds candidates as PD + PSD sums, which stay
    PD, and passes validate=False to skip the eigenvalue sweep.
    """

    def __init__(self, layers: Sequence[np.ndarray], validate: bool = True):
        frozen = []
        for layer in layers:
            matrix = np.array(layer, dtype=complex)
            matrix.setflags(write=False)
            frozen.append(matrix)
        if not frozen:
            raise DomainError("DECoR needs at least one layer")
        n = frozen[0].shape[0]
        for index, matrix in enumerate(frozen):
            if matrix.shape != (n, n):
                raise DomainError(f"layer {index} has shape {matrix.shape}, expected {(n, n)}")
        self._layers = tuple(frozen)
        self._n = int(n)
        if validate:
            self.validate()

    @property
    def layers(self) -> tuple:
        return self._layers

    @property
    def n(self) -> int:
        return self._n

    @property
    def depth(self) -> int:
        return len(self._layers)

    def validate(self) -> None:
        """Raise DomainError unless every layer is Hermitian and positive definite"""
        for index, matrix in enumerate(self._layers):
            if np.max(np.abs(matrix - matrix.conj().T)) > LAYER_HERMITIAN_TOL * max(1.0, np.max(np.abs(matrix))):
                raise DomainError(f"layer {index} is not Hermitian")
            smallest = eigvalsh((matrix + matrix.conj().T) / 2.0, subset_by_index=[0, 0])[0]
            if not smallest >= LAYER_PD_SCALE * np.linalg.norm(matrix, "fro"):
                raise DomainError(f"layer {index} is not positive definite (min eigenvalue {smallest:.3e})")

    def perturbed(self, directions: Sequence[np.ndarray]) -> "DecorParams":
        """New parameter set chi_i + D_i; PSD directions keep every layer PD"""
        if len(directions) != self.depth:
            raise DomainError(f"expected {self.depth} directions, got {len(directions)}")
        return DecorParams([layer + direction for layer, direction in zip(self._layers, directions)], validate=False)

    @classmethod
    def identity(cls, n: int, depth: int) -> "DecorParams":
        return cls([np.eye(n, dtype=complex) for _ in range(depth)])

    @classmethod
    def tied(cls, chi: np.ndarray, depth: int) -> "DecorParams":
        """Every layer set to the same matrix (plain PMLI unrolled depth times)"""
        return cls([chi for _ in range(depth)])


def activation(u: np.ndarray) -> np.ndarray:
    """S(u) = exp(j arg(u)) entrywise, 1 where u_k vanishes"""
    return unimodular_projection(u)


def _check_input(params: DecorParams, s0: UnimodularCode) -> None:
    if params.n != s0.n:
        raise DomainError(f"dimension mismatch: network {params.n}, code {s0.n}")


def forward(params: DecorParams, s0: UnimodularCode) -> UnimodularCode:
    """
    Run the network on an initial code.

    Args:
        params: Layer matrices
        s0: Initial unimodular code

    Returns:
        s_L, the output of the last layer
    """
    _check_input(params, s0)
    entries = s0.entries
    for matrix in params.layers:
        entries = layer_update(matrix, entries)
    return UnimodularCode(entries)


def forward_trace(params: DecorParams, s0: UnimodularCode) -> List[UnimodularCode]:
    """Outputs of every layer, first layer first"""
    _check_input(params, s0)
    outputs = []
    entries = s0.entries
    for matrix in params.layers:
        entries = layer_update(matrix, entries)
        outputs.append(UnimodularCode(entries))
    return outputs
