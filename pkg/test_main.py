import asyncio
import json

import pytest

from conftest import layered
from main import EXIT_OK, EXIT_UNSCHEDULABLE, EXIT_USAGE, run_cli
from taskmodel.documents import save_taskset


def cli(*argv):
    return asyncio.run(run_cli(list(argv)))


def test_generate_check_simulate(tmp_path, capsys):
    taskset = str(tmp_path / "set.json")
    plan = str(tmp_path / "plan.json")
    trace = str(tmp_path / "trace.csv")

    assert cli("generate", "--m", "8", "--n", "10", "--util", "30", "--seed", "2", "--out", taskset) == EXIT_OK
    with open(taskset) as f:
        assert len(json.load(f)["tasks"]) == 10
    capsys.readouterr()

    assert cli("check", taskset, "--algo", "sfs", "--out", plan) == EXIT_OK
    assert capsys.readouterr().out.startswith("SCHEDULABLE")

    assert cli("simulate", plan, "--trace-csv", trace) == EXIT_OK
    assert "0 violations" in capsys.readouterr().out
    with open(trace) as f:
        assert f.readline().strip() == "tick,processor,owner"


def test_unschedulable_set_exits_with_one(tmp_path):
    taskset = str(tmp_path / "set.json")
    plan = str(tmp_path / "plan.json")
    save_taskset(taskset, 8, [layered(1, [[60], [70]], period=100)])
    assert cli("check", taskset, "--out", plan) == EXIT_UNSCHEDULABLE
    assert cli("simulate", plan) == EXIT_UNSCHEDULABLE


def test_platform_override(tmp_path, capsys):
    taskset = str(tmp_path / "set.json")
    save_taskset(taskset, 2, [layered(1, [[10, 10, 10, 10]], period=20)])
    out = str(tmp_path / "plan.json")
    assert cli("check", taskset, "--algo", "fs", "--out", out) == EXIT_UNSCHEDULABLE
    assert cli("check", taskset, "--algo", "fs", "--m", "3", "--out", out) == EXIT_OK


def test_sweep_and_stats(tmp_path, capsys):
    out = str(tmp_path / "acceptance.csv")
    code = cli("sweep", "--m", "8", "--n", "10", "--util-grid", "10,20", "--sets", "2", "--workers", "1",
               "--out", out)
    assert code == EXIT_OK
    with open(out) as f:
        assert len(f.readlines()) == 1 + 2 * 2
    assert "Max SFS-FS gap" in capsys.readouterr().out

    assert cli("stats", "--m", "8", "--n", "10", "--util", "70", "--sets", "5") == EXIT_OK
    assert "heavy DAGs per set" in capsys.readouterr().out


def test_usage_errors(tmp_path):
    assert cli("sweep", "--util-grid", "0:50:10", "--out", str(tmp_path / "x.csv")) == EXIT_USAGE
    assert cli("generate", "--m", "8", "--n", "10", "--util", "150", "--out", str(tmp_path / "x.json")) == EXIT_USAGE
    assert cli("check", str(tmp_path / "missing.json")) == EXIT_USAGE
    with open(tmp_path / "broken.json", "w") as f:
        f.write("{}")
    assert cli("check", str(tmp_path / "broken.json")) == EXIT_USAGE
    with pytest.raises(SystemExit):
        cli("check", "x.json", "--algo", "edf")


def test_malformed_plan_piece_is_a_usage_error(tmp_path):
    taskset = str(tmp_path / "set.json")
    plan = str(tmp_path / "plan.json")
    save_taskset(taskset, 1, [layered(1, [[3]], period=20)])
    assert cli("check", taskset, "--out", plan) == EXIT_OK
    with open(plan) as f:
        document = json.load(f)
    piece = document["bins"][0]["members"][0]
    piece["exec_time"] = piece["deadline"] + 1
    with open(plan, "w") as f:
        json.dump(document, f)
    assert cli("simulate", plan) == EXIT_USAGE
