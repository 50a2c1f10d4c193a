import json

from tspvqa import cli, core


def test_gen_instance_and_encode(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    assert cli.main(["gen-instance", "--n", "4", "--seed", "3", "--out", str(inst_path)]) == 0
    inst = core.load_instance(inst_path)
    assert inst.n == 4

    poly_path = tmp_path / "qubo.txt"
    assert cli.main(["encode", "--scheme", "qubo", "--instance", str(inst_path),
                     "--penalty", "100", "--out", str(poly_path)]) == 0
    lines = poly_path.read_text().splitlines()
    assert lines and all(":" in line for line in lines)

    assert cli.main(["encode", "--scheme", "perm", "--instance", str(inst_path),
                     "--out", str(tmp_path / "na.txt")]) == 2


def test_run_and_landscape_commands(tmp_path, capsys):
    config = {
        "scheme": "permutation", "algorithm": "vqe",
        "instance_n": 4, "instance_seed": 11,
        "restarts": 2, "master_seed": 5, "max_sweeps": 2, "max_evaluations": 40,
        "out_dir": str(tmp_path / "results"),
    }
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps(config))
    assert cli.main(["run", "--config", str(config_path)]) == 0
    records = list((tmp_path / "results").glob("run_*.json"))
    assert len(records) == 1

    scan_path = tmp_path / "scan.csv"
    assert cli.main(["landscape", "--record", str(records[0]), "--axes", "0,1",
                     "--resolution", "4", "--out", str(scan_path)]) == 0
    lines = scan_path.read_text().splitlines()
    assert lines[0] == "theta_k1,theta_k2,energy"
    assert len(lines) == 17


def test_matrix_command(tmp_path, capsys):
    config = {
        "instances": [{"n": 4, "seed": 11}],
        "schemes": ["permutation"],
        "restarts": 1, "master_seed": 2, "max_sweeps": 1, "max_evaluations": 40,
        "out_dir": str(tmp_path),
    }
    config_path = tmp_path / "matrix.json"
    config_path.write_text(json.dumps(config))
    assert cli.main(["matrix", "--config", str(config_path)]) == 0
    assert (tmp_path / "summary.csv").exists()
