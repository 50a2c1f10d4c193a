import csv
import json

import numpy as np
import pytest

from tspvqa import core, metrics, runner
from tspvqa.errors import ConfigError, InvalidArgumentError, ResourceLimitError


def small_config(**overrides):
    payload = dict(scheme="permutation", algorithm="vqe",
                   instance_n=4, instance_seed=11,
                   restarts=3, master_seed=5, max_sweeps=3, max_evaluations=50,
                   out_dir="results")
    payload.update(overrides)
    return runner.RunConfig.from_dict(payload)


def strip_timing(record):
    record = json.loads(json.dumps(record))
    record.pop("wall_clock_seconds", None)
    return record


def test_permutation_qaoa_rejected():
    with pytest.raises(ConfigError):
        small_config(scheme="permutation", algorithm="qaoa")


def test_reserved_optimizers_rejected():
    for name in ("slsqp", "cg", "cobyla", "powell", "umda"):
        with pytest.raises(ConfigError):
            small_config(optimizer=name)


def test_default_penalties_applied():
    assert small_config(scheme="qubo").penalty == 100.0
    assert small_config(scheme="hobo").penalty == 200.0


def test_config_needs_an_instance():
    with pytest.raises(ConfigError):
        runner.RunConfig(scheme="qubo", algorithm="vqe")


def test_permutation_runs_report_unit_feasibility():
    record = runner.run_experiment(small_config(), write=False)
    assert record["aggregate"]["r_f_mean"] == 1.0
    assert record["aggregate"]["r_f_std"] == 0.0
    for restart in record["restarts"]:
        assert restart["metrics"]["r_f"] == 1.0


def test_run_deterministic_for_fixed_seed(tmp_path):
    a = runner.run_experiment(small_config(out_dir=str(tmp_path / "a")))
    b = runner.run_experiment(small_config(out_dir=str(tmp_path / "b")))
    a, b = strip_timing(a), strip_timing(b)
    a["config"].pop("out_dir")
    b["config"].pop("out_dir")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_restart_reproducible_in_isolation():
    config = small_config()
    record = runner.run_experiment(config, write=False)
    setup = runner.build_setup(config)
    redo = runner._run_restart(setup, 1)
    assert redo == record["restarts"][1]


def test_restart_seeds_derived_from_master():
    seeds = {runner.restart_seed(5, i) for i in range(100)}
    assert len(seeds) == 100
    assert runner.restart_seed(5, 0) != runner.restart_seed(6, 0)


def test_workers_do_not_change_results():
    a = runner.run_experiment(small_config(), write=False)
    b = runner.run_experiment(small_config(workers=3), write=False)
    assert strip_timing(a)["restarts"] == strip_timing(b)["restarts"]


def test_shots_mode_deterministic():
    config = small_config(mode="shots", shots=256)
    a = runner.run_experiment(config, write=False)
    b = runner.run_experiment(config, write=False)
    assert strip_timing(a) == strip_timing(b)


def test_budget_zero_matches_uniform_decode_baseline():
    # random two-local states should be feasible at roughly the 6/512 rate
    config = runner.RunConfig(scheme="qubo", algorithm="vqe",
                              instance_n=4, instance_seed=11,
                              restarts=60, master_seed=1, max_evaluations=0)
    record = runner.run_experiment(config, write=False)
    baseline = 6 / 512
    assert baseline / 3 < record["aggregate"]["r_f_mean"] < baseline * 3


def test_large_register_requires_flag():
    config = small_config(scheme="qubo", instance_n=6, instance_seed=1)
    with pytest.raises(ResourceLimitError):
        runner.build_setup(config)


def test_summary_csv_roundtrip(tmp_path):
    config = small_config(out_dir=str(tmp_path))
    record = runner.run_experiment(config)
    with open(tmp_path / "summary.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    row = rows[0]
    assert row["scheme"] == "permutation" and row["algorithm"] == "vqe"
    # aggregates recomputable from per-restart records
    r_f = np.array([r["metrics"]["r_f"] for r in record["restarts"] if not r["failed"]])
    r_ell = np.array([r["metrics"]["r_ell"] for r in record["restarts"] if not r["failed"]])
    assert float(row["r_f_mean"]) == pytest.approx(r_f.mean())
    assert float(row["r_ell_mean"]) == pytest.approx(r_ell.mean())
    assert float(row["r_ell_std"]) == pytest.approx(r_ell.std(ddof=1))
    assert int(row["failures"]) == 0


def test_matrix_has_five_valid_cells(tmp_path):
    matrix_config = {
        "instances": [{"n": 4, "seed": 11}],
        "restarts": 2, "master_seed": 3, "max_sweeps": 1, "max_evaluations": 150,
        "out_dir": str(tmp_path),
    }
    records, errors = runner.run_matrix(matrix_config)
    assert errors == []
    cells = {(r["config"]["scheme"], r["config"]["algorithm"]) for r in records}
    assert cells == {("qubo", "vqe"), ("qubo", "qaoa"), ("hobo", "vqe"),
                     ("hobo", "qaoa"), ("permutation", "vqe")}
    with open(tmp_path / "summary.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 5


def test_matrix_empty_instances(tmp_path):
    records, errors = runner.run_matrix({"instances": [], "out_dir": str(tmp_path)})
    assert records == [] and errors == []


def test_matrix_cell_failure_does_not_abort(tmp_path):
    matrix_config = {
        "instances": [{"n": 6, "seed": 1}],  # n=6 QUBO needs allow_large
        "schemes": ["qubo", "permutation"],
        "algorithms": ["vqe"],
        "restarts": 2, "master_seed": 3, "max_sweeps": 1, "max_evaluations": 80,
        "out_dir": str(tmp_path),
    }
    records, errors = runner.run_matrix(matrix_config)
    assert len(records) == 1 and records[0]["config"]["scheme"] == "permutation"
    assert len(errors) == 1 and errors[0]["scheme"] == "qubo"
    assert (tmp_path / "matrix_errors.json").exists()


def test_landscape_from_record_consistency(tmp_path):
    config = small_config(scheme="hobo", algorithm="qaoa", out_dir=str(tmp_path),
                          max_evaluations=20)
    record = runner.run_experiment(config)
    axes, grid, matrix = runner.scan_landscape_from_record(record, restart=0, axes=(0, 1),
                                                           resolution=4)
    assert axes == (0, 1) and matrix.shape == (4, 4)
    # spot-check three cells against a fresh re-simulation
    setup = runner.build_setup(config)
    base = np.asarray(record["restarts"][0]["best_params"])
    rng = np.random.default_rng(0)
    for _ in range(3):
        a, b = rng.integers(0, 4, size=2)
        point = base.copy()
        point[0], point[1] = grid[a], grid[b]
        assert matrix[a, b] == pytest.approx(setup.evaluate(point), abs=1e-12)


def test_landscape_axes_seed_deterministic(tmp_path):
    config = small_config(out_dir=str(tmp_path), max_evaluations=40)
    record = runner.run_experiment(config)
    axes1, _, _ = runner.scan_landscape_from_record(record, axes_seed=9, resolution=2)
    axes2, _, _ = runner.scan_landscape_from_record(record, axes_seed=9, resolution=2)
    assert axes1 == axes2
    with pytest.raises(InvalidArgumentError):
        runner.scan_landscape_from_record(record, restart=99, axes=(0, 1))
