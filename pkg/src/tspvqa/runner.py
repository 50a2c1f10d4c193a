"""Experiment orchestration: configs, the method x encoding matrix, restart
management, and JSON/CSV persistence.

A run is fully deterministic in exact mode for a fixed master seed: restart i
derives its own seed from sha256(master_seed, i) and is reproducible in
isolation.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from tspvqa import core, hamiltonian, metrics, optimize, simulator
from tspvqa.encodings import EncodingScheme, SchemeKind, build_polynomial, decode_table
from tspvqa.errors import ConfigError, InvalidArgumentError, ResourceLimitError

# n=6 QUBO needs 25 qubits (~0.5 GB of amplitudes); anything past the n=5
# QUBO register (16 qubits) requires an explicit opt-in.
LARGE_RUN_QUBITS = 16

DEFAULT_PENALTIES = {SchemeKind.QUBO: 100.0, SchemeKind.HOBO: 200.0}

RESERVED_OPTIMIZERS = {"slsqp", "cg", "cobyla", "powell", "umda"}
SUMMARY_COLUMNS = [
    "n", "scheme", "algorithm",
    "r_f_mean", "r_f_std", "r_ell_mean", "r_ell_std",
    "restarts", "failures",
]


@dataclass
class RunConfig:
    scheme: str
    algorithm: str  # "vqe" | "qaoa"
    instance_path: str | None = None
    instance_n: int | None = None
    instance_seed: int | None = None
    penalty: float | None = None
    qaoa_p: int = 2
    optimizer: str = "nft"
    max_sweeps: int = optimize.DEFAULT_NFT_SWEEPS
    max_evaluations: int = optimize.DEFAULT_NFT_BUDGET
    spsa_iterations: int = optimize.DEFAULT_SPSA_ITERATIONS
    restarts: int = 40
    master_seed: int = 0
    mode: str = "exact"  # "exact" | "shots"
    shots: int = 4096
    out_dir: str = "results"
    workers: int = 1
    allow_large: bool = False

    def __post_init__(self):
        self.scheme = SchemeKind(self.scheme).value
        if self.algorithm not in ("vqe", "qaoa"):
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "qaoa" and self.scheme == "permutation":
            raise ConfigError(
                "QAOA cannot be combined with the permutation encoding: "
                "no cost Hamiltonian exists for it"
            )
        if self.mode not in ("exact", "shots"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.optimizer in RESERVED_OPTIMIZERS:
            raise ConfigError(f"optimizer {self.optimizer!r} is reserved but not implemented")
        if self.optimizer not in ("nft", "spsa", "nelder-mead"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.penalty is None and self.scheme != "permutation":
            self.penalty = DEFAULT_PENALTIES[SchemeKind(self.scheme)]
        if self.instance_path is None and (self.instance_n is None or self.instance_seed is None):
            raise ConfigError("config needs either instance_path or instance_n + instance_seed")

    @classmethod
    def from_dict(cls, payload: dict) -> "RunConfig":
        return cls(**payload)

    def to_dict(self) -> dict:
        return asdict(self)

    def tag(self) -> str:
        n = self.instance_n if self.instance_n is not None else Path(self.instance_path).stem
        return f"n{n}_{self.scheme}_{self.algorithm}_{self.optimizer}_seed{self.master_seed}"


def restart_seed(master_seed: int, restart: int) -> int:
    digest = hashlib.sha256(f"{master_seed}:{restart}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def load_config_instance(config: RunConfig) -> core.TspInstance:
    if config.instance_path is not None:
        return core.load_instance(config.instance_path)
    return core.generate_instance(config.instance_n, config.instance_seed)


@dataclass
class ExperimentSetup:
    """Everything shared across restarts of one run."""

    config: RunConfig
    instance: core.TspInstance
    scheme: EncodingScheme
    objective_energies: np.ndarray  # E_s per basis state
    feasible_mask: np.ndarray
    lengths: np.ndarray
    stats: core.TourStats
    arity: int

    def evaluate(self, params: np.ndarray) -> float:
        state = self.prepare_state(params)
        probs = simulator.probabilities(state)
        return float(probs @ self.objective_energies)

    def prepare_state(self, params: np.ndarray) -> simulator.StateVector:
        q = self.scheme.num_qubits
        if self.config.algorithm == "vqe":
            return simulator.apply_two_local(simulator.prepare_zero(q), params)
        p = self.config.qaoa_p
        h = hamiltonian.DiagonalHamiltonian(q, self.objective_energies)
        return simulator.apply_qaoa(h, p, params[:p], params[p:])

    def final_distribution(self, params: np.ndarray, seed: int) -> np.ndarray:
        state = self.prepare_state(params)
        if self.config.mode == "shots":
            return metrics._as_distribution(simulator.sample(state, self.config.shots, seed),
                                            1 << self.scheme.num_qubits)
        return simulator.probabilities(state)


def build_setup(config: RunConfig) -> ExperimentSetup:
    inst = load_config_instance(config)
    scheme = EncodingScheme(kind=config.scheme, n=inst.n, penalty=config.penalty)
    q = scheme.num_qubits
    if q > LARGE_RUN_QUBITS and not config.allow_large:
        raise ResourceLimitError(
            f"{q} qubits exceeds the default limit of {LARGE_RUN_QUBITS}; pass allow_large"
        )
    if q > simulator.max_qubits():
        raise ResourceLimitError(f"{q} qubits exceeds max_qubits={simulator.max_qubits()}")
    feasible, lengths = decode_table(scheme, inst)
    if scheme.kind is SchemeKind.PERMUTATION:
        energies = lengths.copy()  # classical objective: decoded tour length
    else:
        energies = hamiltonian.lower(build_polynomial(scheme, inst), q).energies
    arity = simulator.two_local_param_count(q) if config.algorithm == "vqe" else 2 * config.qaoa_p
    return ExperimentSetup(
        config=config,
        instance=inst,
        scheme=scheme,
        objective_energies=energies,
        feasible_mask=feasible,
        lengths=lengths,
        stats=core.brute_force_stats(inst),
        arity=arity,
    )


def _run_optimizer(setup: ExperimentSetup, init: np.ndarray, seed: int) -> optimize.OptTrace:
    config = setup.config
    if config.max_evaluations == 0:
        # no optimization: score the random initial point
        trace = optimize.OptTrace()
        trace.record(init, setup.evaluate(init))
        return trace
    if config.optimizer == "nft":
        return optimize.nft_minimize(setup.evaluate, init,
                                     max_sweeps=config.max_sweeps, budget=config.max_evaluations)
    if config.optimizer == "spsa":
        return optimize.spsa_minimize(setup.evaluate, init,
                                      iterations=config.spsa_iterations, seed=seed)
    return optimize.nelder_mead_minimize(setup.evaluate, init, budget=config.max_evaluations)


def _run_restart(setup: ExperimentSetup, restart: int) -> dict:
    seed = restart_seed(setup.config.master_seed, restart)
    init = optimize.random_initial_params(setup.arity, seed)
    trace = _run_optimizer(setup, init, seed)
    best_params = trace.best_params
    dist = setup.final_distribution(best_params, seed)
    failed = not np.isfinite(trace.best_energy)
    if failed:
        report = None
    else:
        report = metrics.compute_metrics(dist, setup.feasible_mask, setup.lengths, setup.stats)
    top = np.argsort(dist)[::-1][:8]
    return {
        "restart": restart,
        "seed": seed,
        "failed": failed,
        "initial_params": init.tolist(),
        "best_params": best_params.tolist(),
        "best_energy": trace.best_energy,
        "num_evaluations": len(trace),
        "trace_energies": trace.energies,
        "top_states": [[int(s), float(dist[s])] for s in top],
        "metrics": report.as_dict() if report else None,
    }


def run_experiment(config: RunConfig, write: bool = True) -> dict:
    """Execute all restarts of one configuration and return the RunRecord."""
    started = time.time()
    setup = build_setup(config)
    indices = range(config.restarts)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            restarts = list(pool.map(lambda i: _run_restart(setup, i), indices))
    else:
        restarts = [_run_restart(setup, i) for i in indices]

    ok = [r for r in restarts if not r["failed"]]
    r_f = np.array([r["metrics"]["r_f"] for r in ok])
    r_ell = np.array([r["metrics"]["r_ell"] for r in ok])
    record = {
        "config": config.to_dict(),
        "instance": {
            "n": setup.instance.n,
            "coords": setup.instance.coords.tolist(),
            "seed": setup.instance.seed,
        },
        "num_qubits": setup.scheme.num_qubits,
        "l_min": setup.stats.l_min,
        "l_max": setup.stats.l_max,
        "energy_bounds": [float(setup.objective_energies.min()),
                          float(setup.objective_energies.max())],
        "restarts": restarts,
        "aggregate": {
            "r_f_mean": float(r_f.mean()) if ok else float("nan"),
            "r_f_std": float(r_f.std(ddof=1)) if len(ok) > 1 else 0.0,
            "r_ell_mean": float(r_ell.mean()) if ok else float("nan"),
            "r_ell_std": float(r_ell.std(ddof=1)) if len(ok) > 1 else 0.0,
            "failures": len(restarts) - len(ok),
        },
        "wall_clock_seconds": time.time() - started,
    }
    if write:
        out_dir = Path(config.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        record_path = out_dir / f"run_{config.tag()}.json"
        with open(record_path, "w") as fh:
            json.dump(record, fh, indent=1, sort_keys=True)
        append_summary_row(out_dir / "summary.csv", summary_row(record))
    return record


def summary_row(record: dict) -> dict:
    agg = record["aggregate"]
    return {
        "n": record["instance"]["n"],
        "scheme": record["config"]["scheme"],
        "algorithm": record["config"]["algorithm"],
        "r_f_mean": agg["r_f_mean"],
        "r_f_std": agg["r_f_std"],
        "r_ell_mean": agg["r_ell_mean"],
        "r_ell_std": agg["r_ell_std"],
        "restarts": record["config"]["restarts"],
        "failures": agg["failures"],
    }


def append_summary_row(path, row: dict) -> None:
    path = Path(path)
    fresh = not path.exists()
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        if fresh:
            writer.writeheader()
        writer.writerow(row)


def run_matrix(matrix_config: dict) -> tuple[list[dict], list[dict]]:
    """Cross product of instances x schemes x algorithms, minus invalid cells.

    A failed cell is reported in the summary (row omitted, error collected)
    without aborting the rest.
    """
    instances = matrix_config["instances"]  # [{"n":, "seed":} or {"path":}]
    schemes = matrix_config.get("schemes", ["qubo", "hobo", "permutation"])
    algorithms = matrix_config.get("algorithms", ["vqe", "qaoa"])
    shared = {k: v for k, v in matrix_config.items()
              if k not in ("instances", "schemes", "algorithms")}
    out_dir = Path(shared.get("out_dir", "results"))
    records, errors = [], []
    for spec in instances:
        for scheme in schemes:
            for algorithm in algorithms:
                if scheme == "permutation" and algorithm == "qaoa":
                    continue
                payload = dict(shared)
                payload.update(scheme=scheme, algorithm=algorithm)
                if "path" in spec:
                    payload["instance_path"] = spec["path"]
                else:
                    payload.update(instance_n=spec["n"], instance_seed=spec["seed"])
                payload.pop("penalty", None)  # scheme default unless given per cell
                if "penalty" in spec:
                    payload["penalty"] = spec["penalty"]
                try:
                    records.append(run_experiment(RunConfig.from_dict(payload)))
                except Exception as exc:  # noqa: BLE001 - one cell must not kill the matrix
                    errors.append({"scheme": scheme, "algorithm": algorithm,
                                   "instance": spec, "error": f"{type(exc).__name__}: {exc}"})
    out_dir.mkdir(parents=True, exist_ok=True)
    if errors:
        with open(out_dir / "matrix_errors.json", "w") as fh:
            json.dump(errors, fh, indent=1)
    return records, errors


def scan_landscape_from_record(
    record: dict,
    restart: int = 0,
    axes: tuple[int, int] | None = None,
    axes_seed: int | None = None,
    resolution: int = 64,
):
    """Re-simulate a stored run and scan two parameters around its optimum."""
    config = RunConfig.from_dict(record["config"])
    entries = [r for r in record["restarts"] if r["restart"] == restart]
    if not entries:
        raise InvalidArgumentError(f"record has no restart {restart}")
    base = np.asarray(entries[0]["best_params"], dtype=float)
    if axes is None:
        if axes_seed is None:
            raise InvalidArgumentError("need explicit axes or an axes seed")
        rng = np.random.default_rng(axes_seed)
        k1, k2 = rng.choice(base.size, size=2, replace=False)
        axes = (int(k1), int(k2))
    setup = build_setup(config)
    grid, matrix = metrics.landscape_scan(setup.evaluate, base, axes, resolution)
    return axes, grid, matrix
