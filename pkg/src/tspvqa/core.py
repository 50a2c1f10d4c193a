"""TSP instances, route evaluation, and the exhaustive brute-force oracle.

Nodes are numbered 1..n.  Node 1 is always the first stop of a route (the
fixed-first-city convention); a route is therefore determined by the order of
the remaining n-1 nodes.  Tours are closed: the edge back to node 1 counts.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from tspvqa.errors import InvalidArgumentError, ResourceLimitError

# (n-1)! routes are enumerated; 9! = 362880 is the practical ceiling.
BRUTE_FORCE_MAX_NODES = 10

Route = tuple[int, ...]


@dataclass(frozen=True)
class TspInstance:
    """Euclidean TSP instance: coordinates plus the derived distance matrix."""

    coords: np.ndarray  # (n, 2) float64
    w: np.ndarray       # (n, n) symmetric, zero diagonal
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    def __post_init__(self):
        self.coords.setflags(write=False)
        self.w.setflags(write=False)


def _distance_matrix(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def make_instance(coords, seed: int | None = None) -> TspInstance:
    """Build an instance from coordinates, recomputing the distance matrix."""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise InvalidArgumentError(f"coords must have shape (n, 2), got {coords.shape}")
    n = coords.shape[0]
    if n < 3:
        raise InvalidArgumentError(f"need at least 3 nodes, got {n}")
    w = _distance_matrix(coords)
    if np.any(w[~np.eye(n, dtype=bool)] == 0.0):
        raise InvalidArgumentError("duplicate coordinates: off-diagonal distance is zero")
    return TspInstance(coords=coords.copy(), w=w, seed=seed)


def generate_instance(n: int, seed: int) -> TspInstance:
    """Draw n node coordinates i.i.d. uniform on the [0, 100]^2 box."""
    if n < 3:
        raise InvalidArgumentError(f"need at least 3 nodes, got {n}")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(0.0, 100.0, size=(n, 2))
    # Coincident draws have probability zero but would break w_ij > 0.
    while len({tuple(c) for c in coords}) < n:  # pragma: no cover
        coords = rng.uniform(0.0, 100.0, size=(n, 2))
    return make_instance(coords, seed=seed)


def save_instance(inst: TspInstance, path) -> None:
    payload = {"n": inst.n, "coords": inst.coords.tolist(), "seed": inst.seed}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_instance(path) -> TspInstance:
    with open(path) as fh:
        payload = json.load(fh)
    coords = np.asarray(payload["coords"], dtype=float)
    if coords.shape[0] != payload["n"]:
        raise InvalidArgumentError("instance file: 'n' disagrees with number of coordinates")
    return make_instance(coords, seed=payload.get("seed"))


def _check_route(inst: TspInstance, route) -> Route:
    route = tuple(int(v) for v in route)
    if sorted(route) != list(range(1, inst.n + 1)):
        raise InvalidArgumentError(f"route {route} is not a permutation of 1..{inst.n}")
    if route[0] != 1:
        raise InvalidArgumentError(f"route {route} does not start at node 1")
    return route


def tour_length(inst: TspInstance, route) -> float:
    """Closed-tour length, including the edge from the last node back to the first."""
    route = _check_route(inst, route)
    idx = np.asarray(route) - 1
    return float(inst.w[idx, np.roll(idx, -1)].sum())


@dataclass(frozen=True)
class TourStats:
    """Exact extremes over all first-city-fixed routes of an instance."""

    l_min: float
    l_max: float
    optimal_routes: frozenset[Route] = field(repr=False)
    route_count: int = 0


def iter_routes(n: int):
    """All (n-1)! routes with node 1 fixed first."""
    for rest in itertools.permutations(range(2, n + 1)):
        yield (1,) + rest


def brute_force_stats(inst: TspInstance) -> TourStats:
    """Exhaustive enumeration of every route; exact l_min, l_max and all minimizers."""
    n = inst.n
    if n > BRUTE_FORCE_MAX_NODES:
        raise ResourceLimitError(f"brute force limited to n <= {BRUTE_FORCE_MAX_NODES}, got {n}")
    l_min = math.inf
    l_max = -math.inf
    best: set[Route] = set()
    count = 0
    for route in iter_routes(n):
        length = tour_length(inst, route)
        count += 1
        if length < l_min - 1e-12:
            l_min = length
            best = {route}
        elif length <= l_min + 1e-12:
            best.add(route)
        if length > l_max:
            l_max = length
    return TourStats(l_min=l_min, l_max=l_max, optimal_routes=frozenset(best), route_count=count)
