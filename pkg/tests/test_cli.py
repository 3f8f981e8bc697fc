import json

import pytest

from mrenergy.cli import main


@pytest.fixture
def inst_file(tmp_path):
    path = tmp_path / "inst.json"
    assert main(["generate", "--m", "3", "--n", "2", "--maps", "1", "--reduces", "1",
                 "--energy", "40", "--seed", "1", "-o", str(path)]) == 0
    return path


def test_generate_families(tmp_path):
    out = tmp_path / "gap.json"
    assert main(["generate", "--family", "fcfs-gap", "--n", "3", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["num_processors"] == 3


def test_alpha_pipeline_and_validation(inst_file, tmp_path):
    sched, cert = tmp_path / "s.csv", tmp_path / "c.csv"
    assert main(["schedule-alpha", str(inst_file), "-o", str(sched),
                 "--certificate", str(cert)]) == 0
    assert cert.read_text().startswith("bound,")
    assert main(["validate", str(inst_file), "--schedule", str(sched)]) == 0
    assert main(["validate", str(inst_file), "--schedule", str(sched), "--budget", "1e-3"]) == 1


def test_lp_cp_order_and_oracle(inst_file, tmp_path, capsys):
    assert main(["solve-lp", str(inst_file), "--mps", str(tmp_path / "m.mps")]) == 0
    assert "# status,optimal" in capsys.readouterr().out
    assert main(["solve-cp", str(inst_file), "--order", "sr"]) == 0
    assert "# converged,True" in capsys.readouterr().out
    order = tmp_path / "order.txt"
    order.write_text("2 1")
    assert main(["schedule-order", str(inst_file), "--order", "file",
                 "--order-file", str(order)]) == 0
    capsys.readouterr()
    assert main(["oracle", str(inst_file)]) == 0
    assert "# objective," in capsys.readouterr().out


def test_ratio_tables(capsys):
    assert main(["ratios", "--beta", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "beta,variant,alpha_star,ratio" and len(out) == 4
    assert main(["tradeoff", "--beta", "3", "--levels", "0,50"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[2].startswith("3.0,50,23.1")


def test_experiment_command(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"ns": [2], "seeds": 1,
                               "base": {"m": 4, "maps_per_job": 1, "reduces_per_job": 1,
                                        "energy_budget": 20.0}}))
    out, means = tmp_path / "r.csv", tmp_path / "m.csv"
    assert main(["experiment", "--config", str(cfg), "-o", str(out), "--means", str(means)]) == 0
    assert len(means.read_text().splitlines()) == 5


def test_bad_input_exit_code(tmp_path, inst_file):
    assert main(["validate", str(tmp_path / "missing.json")]) == 3
    assert main(["oracle", str(inst_file), "--limits", "1,2,1"]) == 3
