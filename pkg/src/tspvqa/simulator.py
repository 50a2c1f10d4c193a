"""Exact statevector simulation of the two ansaetze.

Only the gates the experiments need are implemented: RY, CX, diagonal phase
evolution, and the uniform X-mixer step.  Qubit ordering is little-endian:
bit k of a basis-state index is qubit k.
"""

from __future__ import annotations

import os

import numpy as np

from tspvqa.errors import InvalidArgumentError, ResourceLimitError
from tspvqa.hamiltonian import DiagonalHamiltonian

DEFAULT_MAX_QUBITS = 25
TWO_LOCAL_REPS = 2  # [RY, CX ring] x 2 plus a final RY layer: 3 rotation layers


def max_qubits() -> int:
    return int(os.environ.get("TSPVQA_MAX_QUBITS", DEFAULT_MAX_QUBITS))


class StateVector:
    """Normalized complex amplitude vector over 2^q basis states."""

    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits: int, amps: np.ndarray):
        if amps.shape != (1 << num_qubits,):
            raise InvalidArgumentError(f"expected 2^{num_qubits} amplitudes, got {amps.shape}")
        self.num_qubits = num_qubits
        self.amps = amps

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.sqrt((np.abs(self.amps) ** 2).sum()))


def _check_qubits(q: int) -> None:
    if q < 1:
        raise InvalidArgumentError(f"need at least one qubit, got {q}")
    if q > max_qubits():
        raise ResourceLimitError(f"{q} qubits exceeds the configured maximum of {max_qubits()}")


def prepare_zero(num_qubits: int) -> StateVector:
    _check_qubits(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def prepare_uniform(num_qubits: int) -> StateVector:
    _check_qubits(num_qubits)
    amps = np.full(1 << num_qubits, 2.0 ** (-num_qubits / 2), dtype=complex)
    return StateVector(num_qubits, amps)


def _paired_view(amps: np.ndarray, qubit: int):
    """Reshape so axis 1 enumerates the value of `qubit`."""
    low = 1 << qubit
    return amps.reshape(-1, 2, low)


def apply_ry(state: StateVector, qubit: int, theta: float) -> None:
    view = _paired_view(state.amps, qubit)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - s * a1
    view[:, 1, :] = s * a0 + c * a1


def apply_cx(state: StateVector, control: int, target: int) -> None:
    if control == target:
        raise InvalidArgumentError("control and target must differ")
    n = state.amps.size
    idx = np.arange(n)
    sel = ((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)
    i0 = idx[sel]
    i1 = i0 | (1 << target)
    state.amps[i0], state.amps[i1] = state.amps[i1], state.amps[i0].copy()


def apply_phase(state: StateVector, energies: np.ndarray, gamma: float) -> None:
    """Diagonal evolution: amp_s *= exp(-i * gamma * E_s)."""
    state.amps *= np.exp(-1j * gamma * energies)


def apply_mixer(state: StateVector, beta: float) -> None:
    """exp(-i * beta * sum_j X_j): one 2x2 rotation per qubit."""
    c, s = np.cos(beta), np.sin(beta)
    for qubit in range(state.num_qubits):
        view = _paired_view(state.amps, qubit)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = c * a0 - 1j * s * a1
        view[:, 1, :] = -1j * s * a0 + c * a1


def two_local_param_count(num_qubits: int) -> int:
    return 3 * num_qubits


def apply_two_local(state: StateVector, params) -> StateVector:
    """Two-local ansatz: [RY layer, circular CX layer] x 2, then a final RY layer.

    Mutates and returns `state` (for VQE runs this is |0...0>).  The CX ring
    applies control i -> target (i+1) mod q in qubit order; a single qubit has
    no entanglers.
    """
    params = np.asarray(params, dtype=float)
    q = state.num_qubits
    if params.shape != (3 * q,):
        raise InvalidArgumentError(f"two-local ansatz on {q} qubits needs {3 * q} parameters, got {params.shape}")
    for rep in range(TWO_LOCAL_REPS):
        for qubit in range(q):
            apply_ry(state, qubit, params[rep * q + qubit])
        if q > 1:
            for qubit in range(q):
                apply_cx(state, qubit, (qubit + 1) % q)
    for qubit in range(q):
        apply_ry(state, qubit, params[2 * q + qubit])
    return state


def apply_qaoa(h: DiagonalHamiltonian, p: int, gammas, betas) -> StateVector:
    """Depth-p QAOA from the uniform superposition: alternate phase and X-mixer steps."""
    gammas = np.asarray(gammas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if gammas.shape != (p,) or betas.shape != (p,):
        raise InvalidArgumentError(f"need {p} gammas and {p} betas, got {gammas.shape} and {betas.shape}")
    state = prepare_uniform(h.num_qubits)
    for j in range(p):
        apply_phase(state, h.energies, gammas[j])
        apply_mixer(state, betas[j])
    return state


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amps) ** 2


def sample(state: StateVector, shots: int, seed: int) -> np.ndarray:
    """i.i.d. basis-state draws from the state's distribution, deterministic per seed."""
    if shots < 1:
        raise InvalidArgumentError(f"need at least one shot, got {shots}")
    probs = probabilities(state)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    return rng.choice(probs.size, size=shots, p=probs)
