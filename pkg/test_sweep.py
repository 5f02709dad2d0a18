import asyncio

import pytest

from assignment import FEDERATED, SFS
from errors import ConfigurationError
from utils.report import SWEEP_COLUMNS, read_csv
from workflow.sweep import SweepConfig, SweepRunner, max_gap, parse_util_grid


def run(runner):
    return asyncio.run(runner.run())


def test_parse_util_grid_forms():
    grid = parse_util_grid("5:100:5")
    assert len(grid) == 20
    assert grid[0] == 0.05 and grid[-1] == 1.0
    assert parse_util_grid("10,50,70") == [0.1, 0.5, 0.7]


@pytest.mark.parametrize("text", ["", "0:50:10", "10:50:0", "abc", "50,120"])
def test_parse_util_grid_rejects_malformed(text):
    with pytest.raises(ConfigurationError):
        parse_util_grid(text)


def test_sweep_config_validation():
    with pytest.raises(ConfigurationError):
        SweepConfig((8,), (10,), algorithms=("edf",))
    with pytest.raises(ConfigurationError):
        SweepConfig((8,), (10,), mode="approx")
    with pytest.raises(ConfigurationError):
        SweepConfig((8,), (10,), sets_per_point=0)


def test_low_utilisation_is_always_accepted():
    sweep = SweepConfig((8,), (10,), util_grid=(0.05,), sets_per_point=5)
    rows = run(SweepRunner(sweep, workers=1))
    assert [r["algorithm"] for r in rows] == [SFS, FEDERATED]
    for row in rows:
        assert row["ratio"] == "1.0000"
        assert row["accepted"] == row["total"] == 5
        assert row["U"] == "0.05"


def test_sweep_rows_are_reproducible_and_ordered():
    sweep = SweepConfig((8,), (10,), util_grid=(0.3, 0.6), sets_per_point=3, seed=5)
    first = run(SweepRunner(sweep, workers=1))
    second = run(SweepRunner(sweep, workers=1))
    assert first == second
    assert [(r["U"], r["algorithm"]) for r in first] == [
        ("0.30", SFS), ("0.30", FEDERATED), ("0.60", SFS), ("0.60", FEDERATED)]


def test_worker_pool_matches_inline_run():
    sweep = SweepConfig((8,), (10,), util_grid=(0.4, 0.7), sets_per_point=3, seed=6)
    assert run(SweepRunner(sweep, workers=2)) == run(SweepRunner(sweep, workers=1))


def test_sweep_writes_csv_and_records_run(tmp_path, store):
    sweep = SweepConfig((8,), (10,), util_grid=(0.2,), sets_per_point=2)
    runner = SweepRunner(sweep, workers=1, store=store)
    rows = run(runner)
    path = str(tmp_path / "acceptance.csv")
    assert runner.write(rows, path) == 2

    written = read_csv(path)
    assert list(written[0]) == SWEEP_COLUMNS
    assert written[0]["format_version"] == "1"

    record = store.get_run_metadata(runner.run_id)
    assert record["data"]["metrics"]["task_sets"] == 2
    assert record["data"]["config"]["m_list"] == [8]


def test_max_gap():
    rows = [
        {"m": 8, "n": 10, "U": "0.50", "algorithm": SFS, "ratio": "0.9000"},
        {"m": 8, "n": 10, "U": "0.50", "algorithm": FEDERATED, "ratio": "0.6000"},
        {"m": 8, "n": 10, "U": "0.70", "algorithm": SFS, "ratio": "0.4000"},
        {"m": 8, "n": 10, "U": "0.70", "algorithm": FEDERATED, "ratio": "0.2000"},
    ]
    assert max_gap(rows) == pytest.approx(0.3)
    assert max_gap(rows[:1]) == 0.0


def ratios(rows, algorithm):
    return [float(r["ratio"]) for r in rows if r["algorithm"] == algorithm]


@pytest.mark.slow
@pytest.mark.parametrize("m,n,min_gap", [(8, 10, 0.25), (16, 10, 0.35), (8, 20, 0.30), (16, 20, 0.30)])
def test_acceptance_study(m, n, min_gap):
    grid = tuple(parse_util_grid("5:100:5"))
    rows = run(SweepRunner(SweepConfig((m,), (n,), util_grid=grid, sets_per_point=100), workers=4))
    sfs, fs = ratios(rows, SFS), ratios(rows, FEDERATED)
    assert all(s >= f - 0.02 for s, f in zip(sfs, fs))
    assert max_gap(rows) >= min_gap
