import random
from collections import defaultdict

import pytest

from conftest import layered, random_dag
from flattening.mcnaughton import (
    FlattenedSchedule,
    ScheduleInterval,
    flatten_dag,
    flatten_segment,
    leftover_dag,
)
from flattening.sizing import (
    ClusterSizing,
    Infeasible,
    SizingMode,
    cluster_size_requirements,
    feasibly_max_flatten,
    graham_cluster_size,
    graham_makespan,
)
from taskmodel.dag_task import longest_path, volume
from taskmodel.segmentation import segment
from utils.ticks import ceil_div


def assert_well_formed(fs: FlattenedSchedule, wcets):
    assert fs.allotted() == {n: c for n, c in wcets.items() if c > 0}
    by_node = defaultdict(list)
    by_processor = defaultdict(list)
    for iv in fs.intervals:
        assert 0 <= iv.start < iv.end <= fs.length
        assert 0 <= iv.processor < fs.width
        by_node[iv.node_id].append(iv)
        by_processor[iv.processor].append(iv)
    for groups in (by_node, by_processor):
        for items in groups.values():
            items.sort(key=lambda iv: iv.start)
            for first, second in zip(items, items[1:]):
                assert second.start >= first.end


def test_wraparound_splits_the_middle_node():
    fs = flatten_segment([4, 4, 4], 2)
    assert fs.length == 6
    assert fs.intervals == (
        ScheduleInterval(1, 0, 0, 4),
        ScheduleInterval(2, 0, 4, 6),
        ScheduleInterval(2, 1, 0, 2),
        ScheduleInterval(3, 1, 2, 6),
    )


def test_segment_length_is_bounded_by_longest_node():
    assert flatten_segment([9, 1], 2).length == 9
    single = flatten_segment([5], 3)
    assert single.length == 5
    assert single.intervals == (ScheduleInterval(1, 0, 0, 5),)


def test_flatten_segment_rejects_bad_input():
    with pytest.raises(ValueError):
        flatten_segment([3], 0)
    with pytest.raises(ValueError):
        flatten_segment({}, 2)


def test_random_segments_are_well_formed():
    rng = random.Random(5)
    for _ in range(10000):
        wcets = {i: rng.randint(1, 30) for i in range(1, rng.randint(1, 8) + 1)}
        width = rng.randint(1, 8)
        fs = flatten_segment(wcets, width)
        assert fs.length == max(max(wcets.values()), ceil_div(sum(wcets.values()), width))
        assert_well_formed(fs, wcets)


def test_flatten_dag_concatenates_segments(fork_join_dag):
    sdag = segment(fork_join_dag)
    assert flatten_dag(sdag, 2).length == 98
    chain = segment(layered(1, [[3], [4]], period=10))
    assert flatten_dag(chain, 4).length == 7
    fan_in = segment(layered(1, [[4, 4, 4], [2]], period=10))
    assert flatten_dag(fan_in, 2).length == 8


def test_random_dag_flattenings_respect_segment_boundaries():
    rng = random.Random(6)
    for _ in range(300):
        dag = random_dag(rng)
        sdag = segment(dag)
        width = rng.randint(1, 6)
        fs = flatten_dag(sdag, width)
        assert_well_formed(fs, sdag.wcets)
        assert fs.length >= sdag.serial_lower_bound
        finish = {}
        start = {}
        for iv in fs.intervals:
            finish[iv.node_id] = max(finish.get(iv.node_id, 0), iv.end)
            start[iv.node_id] = min(start.get(iv.node_id, iv.start), iv.start)
        for u, v in dag.edges:
            if u in finish and v in start:
                assert finish[u] <= start[v]


def test_prefix_keeps_only_the_first_ticks():
    fs = flatten_segment([4, 4, 4], 2)
    head = fs.prefix(3)
    assert head.length == 3
    assert head.allotted() == fs.executed_before(3) == {1: 3, 2: 2, 3: 1}
    with pytest.raises(ValueError):
        fs.prefix(0)
    with pytest.raises(ValueError):
        fs.prefix(7)


def test_schedule_dict_round_trip():
    fs = flatten_segment([4, 4, 4], 2)
    assert FlattenedSchedule.from_dict(fs.to_dict()) == fs


def test_leftover_after_partial_segment():
    sdag = segment(layered(1, [[4, 4, 4]], period=20))
    fs = flatten_dag(sdag, 2)
    rump = leftover_dag(sdag, fs, 3)
    assert rump.segments == ((1, 2, 3),)
    assert rump.wcets == {1: 1, 2: 2, 3: 3}


def test_leftover_after_whole_segment_drops_it():
    sdag = segment(layered(1, [[3], [4]], period=20))
    fs = flatten_dag(sdag, 1)
    rump = leftover_dag(sdag, fs, 3)
    assert rump.segments == ((2,),)
    assert rump.wcets == {2: 4}


def test_leftover_rejects_cut_outside_schedule():
    sdag = segment(layered(1, [[3], [4]], period=20))
    fs = flatten_dag(sdag, 1)
    for cut in (0, 7, 9):
        with pytest.raises(ValueError):
            leftover_dag(sdag, fs, cut)


def test_random_leftovers_conserve_work():
    rng = random.Random(8)
    for _ in range(300):
        sdag = segment(random_dag(rng))
        fs = flatten_dag(sdag, rng.randint(1, 4))
        if fs.length < 2:
            continue
        cut = rng.randint(1, fs.length - 1)
        rump = leftover_dag(sdag, fs, cut)
        assert rump.volume == sdag.volume - sum(fs.executed_before(cut).values())
        for width in (1, 2, 3):
            assert flatten_dag(rump, width).length >= rump.serial_lower_bound


def test_feasibly_max_flatten_picks_smallest_width(fork_join_dag):
    dag = fork_join_dag
    loose = type(dag)(dag.task_id, dag.nodes, dag.edges, 100, 98)
    fs = feasibly_max_flatten(loose)
    assert (fs.width, fs.length) == (2, 98)

    wide = layered(1, [[10, 10]], period=20, deadline=10)
    fs = feasibly_max_flatten(wide)
    assert (fs.width, fs.length) == (2, 10)


def test_feasibly_max_flatten_reports_serial_bound():
    chain = layered(1, [[60], [70]], period=100)
    result = feasibly_max_flatten(chain)
    assert isinstance(result, Infeasible)
    assert result.bound == 130


def test_graham_bounds():
    assert graham_makespan(100, 50, 2) == 75
    assert graham_makespan(40, 40, 3) == 40
    assert graham_cluster_size(100, 50, 75) == 2
    assert graham_cluster_size(40, 10, 20) == 3
    assert isinstance(graham_cluster_size(40, 20, 20), Infeasible)
    with pytest.raises(ValueError):
        graham_makespan(10, 20, 2)
    with pytest.raises(ValueError):
        graham_makespan(10, 5, 0)


def test_graham_wins_when_flattening_cannot_meet_deadline(fork_join_dag):
    sizing = cluster_size_requirements(fork_join_dag)
    assert sizing == ClusterSizing(2, SizingMode.WORK_CONSERVING, 75)


def test_flattening_wins_ties_and_narrower_widths():
    single_segment = layered(1, [[10, 10]], period=20, deadline=10)
    sizing = cluster_size_requirements(single_segment)
    assert (sizing.width, sizing.mode, sizing.budget) == (2, SizingMode.FLATTENED, 10)

    four = layered(2, [[10, 10, 10, 10]], period=20)
    sizing = cluster_size_requirements(four)
    assert (sizing.width, sizing.mode) == (2, SizingMode.FLATTENED)
    assert graham_cluster_size(volume(four), longest_path(four), four.deadline) == 3

    chain = layered(3, [[3], [4]], period=10)
    sizing = cluster_size_requirements(chain)
    assert (sizing.width, sizing.mode, sizing.budget) == (1, SizingMode.FLATTENED, 7)


def test_sizing_infeasible_when_both_methods_fail():
    chain = layered(1, [[60], [70]], period=100)
    assert isinstance(cluster_size_requirements(chain), Infeasible)
