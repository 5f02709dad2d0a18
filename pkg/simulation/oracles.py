import heapq
from typing import Dict, List, Optional, Sequence

from analysis.seq_task import SeqTask
from flattening.mcnaughton import FlattenedSchedule, ScheduleInterval
from taskmodel.dag_task import DagTask
from utils.ticks import hyperperiod


def edf_brute_force(tasks: Sequence[SeqTask], horizon: Optional[int] = None) -> bool:
    """
    Tick-by-tick preemptive EDF with synchronous periodic release.

    Args:
        tasks: Sequential tasks
        horizon: Simulated length, the hyperperiod by default

    Returns:
        True iff no job misses its deadline
    """
    tasks = list(tasks)
    if not tasks:
        return True
    horizon = hyperperiod(t.period for t in tasks) if horizon is None else horizon
    # (absolute deadline, task index, remaining)
    ready: List[List[int]] = []
    for tick in range(horizon):
        for index, task in enumerate(tasks):
            if tick % task.period == 0:
                ready.append([tick + task.deadline, index, task.exec_time])
        if ready:
            job = min(ready, key=lambda j: (j[0], j[1]))
            job[2] -= 1
            if job[2] == 0:
                ready.remove(job)
        if any(j[0] <= tick + 1 for j in ready):
            return False
    return not ready


def list_schedule_intervals(dag: DagTask, width: int) -> FlattenedSchedule:
    """
    Greedy work-conserving list schedule of a DAG on ``width`` processors.

    Ready nodes start in ascending id order on the lowest free processor and
    run to completion. Dummy nodes take no time and no processor.

    Args:
        dag: A valid DagTask
        width: Number of processors

    Returns:
        The schedule; its length is the makespan
    """
    if width < 1:
        raise ValueError(f"width must be at least 1, got {width}")
    graph = dag.graph
    wcets = dag.wcets
    waiting: Dict[int, int] = {n: graph.in_degree(n) for n in graph.nodes}
    ready: List[int] = [n for n, d in waiting.items() if d == 0]
    heapq.heapify(ready)
    running: List[tuple] = []  # (finish, processor, node)
    free = list(range(width))
    intervals: List[ScheduleInterval] = []
    now = 0

    def finish(node: int) -> None:
        for succ in graph.successors(node):
            waiting[succ] -= 1
            if waiting[succ] == 0:
                heapq.heappush(ready, succ)

    while ready or running:
        # zero-length nodes complete on release
        started = True
        while started:
            started = False
            deferred = []
            while ready:
                node = heapq.heappop(ready)
                if wcets[node] == 0:
                    finish(node)
                    started = True
                elif free:
                    processor = free.pop(0)
                    intervals.append(ScheduleInterval(node, processor, now, now + wcets[node]))
                    heapq.heappush(running, (now + wcets[node], processor, node))
                    started = True
                else:
                    deferred.append(node)
            for node in deferred:
                heapq.heappush(ready, node)
            if not free:
                break
        if not running:
            break
        now = running[0][0]
        while running and running[0][0] == now:
            _, processor, node = heapq.heappop(running)
            free.append(processor)
            finish(node)
        free.sort()
    return FlattenedSchedule(width, now, tuple(sorted(intervals, key=lambda iv: (iv.start, iv.processor))))


def list_schedule(dag: DagTask, width: int) -> int:
    """Makespan of the greedy work-conserving list schedule."""
    return list_schedule_intervals(dag, width).length
