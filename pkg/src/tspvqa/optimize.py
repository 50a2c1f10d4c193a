"""Derivative-free optimizers for the variational loop, with full traces.

Every function evaluation is recorded in order; trace length never exceeds
the evaluation budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from tspvqa.errors import InvalidArgumentError

# A per-coordinate sinusoid fit with amplitude below this is treated as flat.
FLAT_FIT_TOL = 1e-12

DEFAULT_NFT_SWEEPS = 10
DEFAULT_NFT_BUDGET = 400
DEFAULT_SPSA_ITERATIONS = 500
DEFAULT_NM_BUDGET = 1000


@dataclass
class OptTrace:
    evaluations: list[tuple[np.ndarray, float]] = field(default_factory=list)

    def record(self, params: np.ndarray, energy: float) -> float:
        self.evaluations.append((params.copy(), float(energy)))
        return float(energy)

    @property
    def energies(self) -> list[float]:
        return [e for _, e in self.evaluations]

    @property
    def best_index(self) -> int:
        return int(np.argmin(self.energies))

    @property
    def best_energy(self) -> float:
        return self.evaluations[self.best_index][1]

    @property
    def best_params(self) -> np.ndarray:
        return self.evaluations[self.best_index][0]

    def __len__(self) -> int:
        return len(self.evaluations)


def random_initial_params(arity: int, seed: int) -> np.ndarray:
    """i.i.d. uniform angles on [0, 2*pi]."""
    if arity < 1:
        raise InvalidArgumentError(f"arity must be positive, got {arity}")
    return np.random.default_rng(seed).uniform(0.0, 2.0 * math.pi, size=arity)


def fit_sinusoid(theta: float, z_at: float, z_plus: float, z_minus: float):
    """Fit a + b*cos(x - c) through f(theta), f(theta + pi/2), f(theta - pi/2).

    Returns (a, b, c) with b >= 0.
    """
    a = (z_plus + z_minus) / 2.0
    b_cos = z_at - a              # b*cos(theta - c)
    b_sin = (z_minus - z_plus) / 2.0  # b*sin(theta - c)
    b = math.hypot(b_cos, b_sin)
    c = theta - math.atan2(b_sin, b_cos)
    return a, b, c


def nft_minimize(
    f,
    init,
    max_sweeps: int = DEFAULT_NFT_SWEEPS,
    budget: int = DEFAULT_NFT_BUDGET,
) -> OptTrace:
    """Sequential per-coordinate sinusoid fitting (Nakanishi-Fujii-Todo style).

    Each coordinate update evaluates the current point and both pi/2 offsets,
    fits a + b*cos(theta - c), and jumps to the fitted minimizer c + pi.  The
    landing point is evaluated so the trace contains the achieved energy; on
    objectives that are exactly sinusoidal per coordinate this makes every
    coordinate update an exact line minimization.
    """
    params = np.asarray(init, dtype=float).copy()
    arity = params.size
    if arity < 1:
        raise InvalidArgumentError("objective must have at least one parameter")
    sweep_cost = 1 + 3 * arity
    if budget < sweep_cost:
        raise InvalidArgumentError(f"budget {budget} below one sweep ({sweep_cost} evaluations)")
    trace = OptTrace()
    e_cur = trace.record(params, f(params))
    for _ in range(max_sweeps):
        moved = False
        for k in range(arity):
            if len(trace) + 2 > budget:
                return trace
            theta = params[k]
            shifted = params.copy()
            shifted[k] = theta + math.pi / 2.0
            z_plus = trace.record(shifted, f(shifted))
            shifted = params.copy()
            shifted[k] = theta - math.pi / 2.0
            z_minus = trace.record(shifted, f(shifted))
            a, b, c = fit_sinusoid(theta, e_cur, z_plus, z_minus)
            if b <= FLAT_FIT_TOL:
                continue  # flat direction
            if len(trace) + 1 > budget:
                return trace
            params[k] = c + math.pi
            e_cur = trace.record(params, f(params))
            moved = True
        if not moved:
            break
    return trace


def spsa_minimize(
    f,
    init,
    iterations: int = DEFAULT_SPSA_ITERATIONS,
    seed: int = 0,
    a: float = 0.2,
    c: float = 0.1,
    stability: float | None = None,
    alpha: float = 0.602,
    gamma: float = 0.101,
) -> OptTrace:
    """Simultaneous-perturbation stochastic approximation with decaying gains."""
    params = np.asarray(init, dtype=float).copy()
    if params.size < 1:
        raise InvalidArgumentError("objective must have at least one parameter")
    if stability is None:
        stability = 0.1 * iterations
    rng = np.random.default_rng(seed)
    trace = OptTrace()
    for k in range(iterations):
        a_k = a / (k + 1 + stability) ** alpha
        c_k = c / (k + 1) ** gamma
        delta = rng.choice([-1.0, 1.0], size=params.size)
        z_plus = trace.record(params + c_k * delta, f(params + c_k * delta))
        z_minus = trace.record(params - c_k * delta, f(params - c_k * delta))
        grad = (z_plus - z_minus) / (2.0 * c_k) / delta
        params = params - a_k * grad
    trace.record(params, f(params))
    return trace


def nelder_mead_minimize(
    f,
    init,
    budget: int = DEFAULT_NM_BUDGET,
    diameter_tol: float = 1e-6,
    initial_step: float = 0.5,
) -> OptTrace:
    """Standard reflect/expand/contract/shrink simplex (coefficients 1, 2, 1/2, 1/2)."""
    x0 = np.asarray(init, dtype=float).copy()
    dim = x0.size
    if dim < 1:
        raise InvalidArgumentError("objective must have at least one parameter")
    trace = OptTrace()

    def ev(x):
        return trace.record(x, f(x))

    simplex = [x0] + [x0 + initial_step * np.eye(dim)[i] for i in range(dim)]
    values = []
    for x in simplex:
        if len(trace) >= budget:
            return trace
        values.append(ev(x))

    while len(trace) < budget:
        order = np.argsort(values)
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        spread = max(np.linalg.norm(simplex[i] - simplex[0]) for i in range(1, dim + 1))
        if spread < diameter_tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + (centroid - simplex[-1])
        fr = ev(reflected)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
            continue
        if fr < values[0]:
            if len(trace) >= budget:
                break
            expanded = centroid + 2.0 * (centroid - simplex[-1])
            fe = ev(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
            continue
        if len(trace) >= budget:
            break
        contracted = centroid + 0.5 * (simplex[-1] - centroid)
        fc = ev(contracted)
        if fc < values[-1]:
            simplex[-1], values[-1] = contracted, fc
            continue
        for i in range(1, dim + 1):  # shrink toward the best vertex
            if len(trace) >= budget:
                return trace
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            values[i] = ev(simplex[i])
    return trace
