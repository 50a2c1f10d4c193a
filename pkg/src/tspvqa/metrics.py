"""Evaluation metrics: feasibility ratio, rescaled length ratio, trace
post-processing, and two-parameter energy-landscape scans."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tspvqa.core import TourStats
from tspvqa.errors import DegenerateInstanceError, InvalidArgumentError


@dataclass(frozen=True)
class MetricReport:
    r_f: float
    r_ell: float
    r_ell_raw: float  # before the linear rescaling to [0, 1]
    l_min: float
    l_max: float

    def as_dict(self) -> dict:
        return {
            "r_f": self.r_f,
            "r_ell": self.r_ell,
            "r_ell_raw": self.r_ell_raw,
            "l_min": self.l_min,
            "l_max": self.l_max,
        }


def _as_distribution(dist, num_states: int) -> np.ndarray:
    """Accept a probability vector or a multiset of sampled basis states."""
    arr = np.asarray(dist)
    if arr.dtype.kind in "iu":  # multiset of sampled basis states
        if arr.size == 0:
            raise InvalidArgumentError("empty sample multiset")
        counts = np.bincount(arr.astype(np.int64), minlength=num_states).astype(float)
        if counts.size > num_states:
            raise InvalidArgumentError("sampled state exceeds the state space")
        return counts / counts.sum()
    probs = arr.astype(float)
    if probs.shape != (num_states,):
        raise InvalidArgumentError(f"expected {num_states} probabilities, got {probs.shape}")
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise InvalidArgumentError(f"probabilities sum to {total}, not 1")
    # renormalize away float residue so an all-feasible mask yields r_f = 1 exactly
    return probs / total


def feasibility_ratio(dist, feasible_mask: np.ndarray) -> float:
    """Probability mass (or empirical fraction) on states that decode to a route."""
    feasible_mask = np.asarray(feasible_mask, dtype=bool)
    probs = _as_distribution(dist, feasible_mask.size)
    if feasible_mask.all():
        return 1.0  # total decoder: every state is a route
    return float(probs[feasible_mask].sum())


def length_ratio(dist, feasible_mask: np.ndarray, lengths: np.ndarray, stats: TourStats) -> float:
    return compute_metrics(dist, feasible_mask, lengths, stats).r_ell


def compute_metrics(dist, feasible_mask: np.ndarray, lengths: np.ndarray, stats: TourStats) -> MetricReport:
    """Feasibility ratio and the rescaled length ratio of one distribution.

    `lengths[s]` is the decoded tour length of basis state s (NaN where
    infeasible); `stats` must come from the brute-force oracle of the same
    instance.
    """
    feasible_mask = np.asarray(feasible_mask, dtype=bool)
    lengths = np.asarray(lengths, dtype=float)
    if stats.l_max <= stats.l_min:
        raise DegenerateInstanceError("all tours have equal length; length ratio undefined")
    probs = _as_distribution(dist, feasible_mask.size)
    r_f = 1.0 if feasible_mask.all() else float(probs[feasible_mask].sum())
    if r_f == 0.0:
        return MetricReport(r_f=0.0, r_ell=0.0, r_ell_raw=0.0, l_min=stats.l_min, l_max=stats.l_max)
    raw = float((probs[feasible_mask] * (stats.l_min / lengths[feasible_mask])).sum()) / r_f
    floor = stats.l_min / stats.l_max
    r_ell = (raw - floor) / (1.0 - floor)
    return MetricReport(r_f=r_f, r_ell=r_ell, r_ell_raw=raw, l_min=stats.l_min, l_max=stats.l_max)


def rescale_energy(energies, e_min: float, e_max: float) -> np.ndarray:
    """Map energies linearly so e_min -> 0 and e_max -> 1."""
    if e_min >= e_max:
        raise InvalidArgumentError(f"need e_min < e_max, got {e_min} >= {e_max}")
    return (np.asarray(energies, dtype=float) - e_min) / (e_max - e_min)


def moving_minimum(energies) -> np.ndarray:
    """Prefix minimum of a trace; non-increasing and idempotent."""
    arr = np.asarray(energies, dtype=float)
    if arr.size == 0:
        raise InvalidArgumentError("empty trace")
    return np.minimum.accumulate(arr)


def landscape_scan(f, base_params, axes: tuple[int, int], resolution: int = 64):
    """Energy grid over [0, 2*pi)^2 for two parameters, the rest held fixed.

    Entry [a, b] is the energy with params[axes[0]] = grid[a] and
    params[axes[1]] = grid[b].  Returns (grid, matrix).
    """
    base = np.asarray(base_params, dtype=float).copy()
    k1, k2 = axes
    if k1 == k2:
        raise InvalidArgumentError("landscape axes must differ")
    for k in (k1, k2):
        if not 0 <= k < base.size:
            raise InvalidArgumentError(f"parameter index {k} out of range for arity {base.size}")
    if resolution < 2:
        raise InvalidArgumentError(f"resolution must be at least 2, got {resolution}")
    grid = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
    matrix = np.empty((resolution, resolution))
    for a, theta1 in enumerate(grid):
        for b, theta2 in enumerate(grid):
            point = base.copy()
            point[k1] = theta1
            point[k2] = theta2
            matrix[a, b] = f(point)
    return grid, matrix


def write_landscape_csv(path, grid: np.ndarray, matrix: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("theta_k1,theta_k2,energy\n")
        for a, theta1 in enumerate(grid):
            for b, theta2 in enumerate(grid):
                fh.write(f"{float(theta1)!r},{float(theta2)!r},{float(matrix[a, b])!r}\n")
