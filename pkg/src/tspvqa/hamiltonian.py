"""Diagonal problem Hamiltonians and classical objectives over basis states.

Both carry a dense energy table E_s indexed by the computational basis state
(bit j of the index = variable/qubit j).  No Pauli-operator layer exists:
phase evolution and expectation values only ever need E_s.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from tspvqa.errors import InvalidArgumentError, ResourceLimitError
from tspvqa.polynomial import BinaryPolynomial

# 2^26 doubles = 512 MB; anything larger must be requested explicitly.
DEFAULT_MATERIALIZE_MAX_QUBITS = 26

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class DiagonalHamiltonian:
    num_qubits: int
    energies: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.energies.shape != (1 << self.num_qubits,):
            raise InvalidArgumentError(
                f"energy table must have 2^{self.num_qubits} entries, got {self.energies.shape}"
            )
        self.energies.setflags(write=False)

    def bounds(self) -> tuple[float, float]:
        return float(self.energies.min()), float(self.energies.max())


class ClassicalObjective(DiagonalHamiltonian):
    """Energy table built from a classical per-state evaluator (no Hamiltonian exists)."""

    @classmethod
    def from_function(cls, evaluator, num_qubits: int) -> "ClassicalObjective":
        energies = np.array([float(evaluator(s)) for s in range(1 << num_qubits)])
        return cls(num_qubits=num_qubits, energies=energies)


def lower(
    poly: BinaryPolynomial,
    num_qubits: int,
    materialize_max_qubits: int = DEFAULT_MATERIALIZE_MAX_QUBITS,
) -> DiagonalHamiltonian:
    """Materialize a binary polynomial as a dense diagonal energy table."""
    if poly.num_vars > num_qubits:
        raise InvalidArgumentError(f"polynomial has {poly.num_vars} variables but only {num_qubits} qubits")
    if num_qubits > materialize_max_qubits:
        raise ResourceLimitError(
            f"{num_qubits} qubits exceeds the materialization limit of {materialize_max_qubits}"
        )
    return DiagonalHamiltonian(num_qubits=num_qubits, energies=poly.evaluate_all(num_qubits))


def expectation(h: DiagonalHamiltonian, probs: np.ndarray) -> float:
    """<E> = sum_s p_s E_s over the basis-state distribution."""
    probs = np.asarray(probs, dtype=float)
    if probs.shape != h.energies.shape:
        raise InvalidArgumentError(f"expected {h.energies.shape[0]} probabilities, got {probs.shape}")
    total = probs.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise InvalidArgumentError(f"probabilities sum to {total}, not 1")
    return float(probs @ h.energies)


def energy_bounds(h: DiagonalHamiltonian) -> tuple[float, float]:
    return h.bounds()


def dump_energy_table(h: DiagonalHamiltonian, path, max_qubits: int = 16) -> None:
    """Golden-test dump: little-endian doubles, one per basis state."""
    if h.num_qubits > max_qubits:
        raise ResourceLimitError(f"energy dump limited to {max_qubits} qubits, got {h.num_qubits}")
    with open(path, "wb") as fh:
        fh.write(struct.pack(f"<{h.energies.size}d", *h.energies))
