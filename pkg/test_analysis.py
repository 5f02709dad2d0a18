import random
from fractions import Fraction

import pytest

from analysis.admission import ExactAdmission, FastAdmission, admission_for
from analysis.edf_tests import (
    EXACT,
    FAST,
    augusto_bound,
    cd_sensitivity,
    dbf,
    density_schedulable,
    exact_edf_schedulable,
)
from analysis.seq_task import SeqTask
from errors import ConfigurationError
from simulation.oracles import edf_brute_force

# every period divides 120, which keeps hyperperiods short
PERIODS = [2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30]


def random_seq_task(rng):
    period = rng.choice(PERIODS)
    deadline = rng.randint(1, period)
    return SeqTask(rng.randint(1, deadline), deadline, period)


def random_task_set(rng, max_tasks=4):
    return [random_seq_task(rng) for _ in range(rng.randint(1, max_tasks))]


def test_seq_task_rejects_malformed_parameters():
    with pytest.raises(ValueError):
        SeqTask(5, 3, 10)
    with pytest.raises(ValueError):
        SeqTask(0, 3, 10)
    with pytest.raises(ValueError):
        SeqTask(2, 12, 10)
    assert SeqTask(3, 3, 10).zero_laxity
    assert SeqTask(3, 6, 10).density == Fraction(1, 2)


def test_dbf_steps_at_deadlines():
    task = SeqTask(2, 5, 10)
    assert [dbf(task, t) for t in (0, 4, 5, 14, 15, 25)] == [0, 0, 2, 2, 4, 6]
    with pytest.raises(ValueError):
        dbf(task, -1)


def test_dbf_grows_by_one_budget_per_period():
    rng = random.Random(1)
    for _ in range(500):
        task = random_seq_task(rng)
        t = rng.randint(task.deadline, 200)
        assert dbf(task, t + task.period) == dbf(task, t) + task.exec_time


def test_exact_test_examples():
    assert exact_edf_schedulable([])
    assert exact_edf_schedulable([SeqTask(3, 5, 10), SeqTask(4, 8, 10)])
    assert not exact_edf_schedulable([SeqTask(3, 4, 10), SeqTask(2, 4, 10)])
    assert not exact_edf_schedulable([SeqTask(6, 10, 10), SeqTask(5, 10, 10)])


def test_exact_test_agrees_with_tick_simulation():
    rng = random.Random(2)
    for _ in range(1000):
        tasks = random_task_set(rng)
        assert exact_edf_schedulable(tasks) == edf_brute_force(tasks)


def test_density_test_is_sufficient():
    rng = random.Random(3)
    for _ in range(1000):
        tasks = random_task_set(rng)
        if density_schedulable(tasks):
            assert exact_edf_schedulable(tasks)


def test_augusto_bound_examples():
    existing = [SeqTask(50, 100, 100)]
    assert augusto_bound(existing, 50) == Fraction(2, 5)
    assert augusto_bound([], 50) == 1
    # no full period of the new task fits before the earliest deadline
    assert augusto_bound([SeqTask(5, 10, 100)], 20) == 0
    assert augusto_bound([SeqTask(10, 10, 10)], 5) == 0


def test_fast_sensitivity_example_is_schedulable():
    existing = [SeqTask(50, 100, 100)]
    budget = cd_sensitivity(existing, 50, cap=50, mode=FAST)
    assert budget == 20
    assert exact_edf_schedulable(existing + [SeqTask(budget, budget, 50)])
    assert cd_sensitivity(existing, 50, cap=50, mode=EXACT) == 25


def test_sensitivity_on_empty_host_is_capped():
    assert cd_sensitivity([], 130, cap=98, mode=FAST) == 98
    assert cd_sensitivity([], 130, cap=98, mode=EXACT) == 98
    assert cd_sensitivity([], 50, cap=98, mode=EXACT) == 50


def test_fast_sensitivity_is_sound_and_never_beats_exact():
    rng = random.Random(4)
    checked = 0
    while checked < 1000:
        existing = random_task_set(rng, max_tasks=3)
        if not density_schedulable(existing):
            continue
        period = rng.choice(PERIODS)
        fast = cd_sensitivity(existing, period, cap=period, mode=FAST)
        exact = cd_sensitivity(existing, period, cap=period, mode=EXACT)
        assert fast <= exact
        if fast > 0:
            assert exact_edf_schedulable(existing + [SeqTask(fast, fast, period)])
        checked += 1


def test_sensitivity_shrinks_as_density_grows():
    budgets = [cd_sensitivity([SeqTask(c, 100, 100)], 25, cap=25) for c in range(1, 100)]
    assert all(a >= b for a, b in zip(budgets, budgets[1:]))
    assert budgets[-1] == 0


def test_sensitivity_rejects_unknown_mode():
    with pytest.raises(ValueError):
        cd_sensitivity([], 10, cap=5, mode="approx")


def test_admission_modes_differ_on_constrained_deadlines():
    existing = [SeqTask(3, 5, 10)]
    assert not FastAdmission().admits(existing, 4, 8, 10)
    assert ExactAdmission().admits(existing, 4, 8, 10)


def test_admission_rejects_malformed_candidates():
    for test in (FastAdmission(), ExactAdmission()):
        assert not test.admits([], 12, 10, 20)
        assert not test.admits([], 0, 10, 20)
        assert test.admits([], 10, 10, 20)


def test_admission_for_modes():
    assert isinstance(admission_for(FAST), FastAdmission)
    assert isinstance(admission_for(EXACT), ExactAdmission)
    assert admission_for(EXACT).max_zero_laxity_budget([SeqTask(50, 100, 100)], 50, 50) == 25
    with pytest.raises(ConfigurationError):
        admission_for("bogus")
