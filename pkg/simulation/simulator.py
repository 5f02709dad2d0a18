import heapq
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from assignment.plan import GangPiece, HostKind, PayloadMode, SystemPlan
from flattening.mcnaughton import FlattenedSchedule
from simulation.oracles import list_schedule_intervals
from simulation.trace import (
    DispatchRecord,
    ExecutionSlice,
    JobRecord,
    NodeRun,
    PieceJobRecord,
    PriorityKey,
    SimTrace,
)
from taskmodel.dag_task import DagTask
from utils.ticks import hyperperiod

logger = logging.getLogger(__name__)

HostKey = Tuple[HostKind, int]


@dataclass
class PieceJob:
    task_id: int
    job_index: int
    piece_index: int
    release: int
    deadline: int
    payload: FlattenedSchedule
    record: PieceJobRecord
    progress: int = 0

    @property
    def key(self) -> PriorityKey:
        return (self.deadline, self.task_id, self.piece_index, self.job_index)

    @property
    def remaining(self) -> int:
        return self.payload.length - self.progress


@dataclass
class HostRuntime:
    processors: Tuple[int, ...]
    ready: List[PieceJob] = field(default_factory=list)


def _payload_for(piece: GangPiece, dag: DagTask, width: int,
                 cache: Dict[Tuple[int, int], FlattenedSchedule]) -> FlattenedSchedule:
    if piece.mode != PayloadMode.WORK_CONSERVING:
        return piece.payload
    key = (dag.task_id, width)
    if key not in cache:
        cache[key] = list_schedule_intervals(dag, width)
    return cache[key]


def simulate_plan(plan: SystemPlan, tasks: Sequence[DagTask], horizon: Optional[int] = None) -> SimTrace:
    """
    Run a successful plan under synchronous, strictly periodic arrivals.

    Every host schedules its pieces by EDF on the reported deadlines; a
    cluster gives all its processors to one piece at a time and replays that
    piece's payload in lockstep. Piece k+1 of a DAG job is released on its
    host when piece k completes. Jobs are released while t < horizon and the
    run continues until all of them have finished.

    Args:
        plan: A plan whose outcome is Success
        tasks: The task set the plan was computed for
        horizon: Release window, the hyperperiod of all periods by default

    Returns:
        The execution trace
    """
    if not plan.success:
        raise ValueError(f"cannot simulate a failed plan: {plan.outcome}")
    dags = {t.task_id: t for t in tasks}
    horizon = hyperperiod(t.period for t in tasks) if horizon is None else horizon
    trace = SimTrace(horizon, plan.m)

    hosts: Dict[HostKey, HostRuntime] = {}
    for cluster in plan.clusters:
        hosts[(HostKind.CLUSTER, cluster.cluster_id)] = HostRuntime(cluster.processors)
    for host in plan.bins:
        hosts[(HostKind.BIN, host.bin_id)] = HostRuntime((host.processor,))

    cache: Dict[Tuple[int, int], FlattenedSchedule] = {}
    pieces: Dict[int, List[Tuple[HostKey, GangPiece, FlattenedSchedule]]] = {}
    for task_id, dag in dags.items():
        chain = []
        for location, piece in plan.pieces_of(task_id):
            key = (location.host, location.host_id)
            chain.append((key, piece, _payload_for(piece, dag, len(hosts[key].processors), cache)))
        pieces[task_id] = chain

    releases: List[Tuple[int, int, int, int, int]] = []
    sequence = 0
    for task_id, dag in sorted(dags.items()):
        for job_index, release in enumerate(range(0, horizon, dag.period)):
            record = JobRecord(task_id, job_index, release, release + dag.deadline)
            trace.jobs[(task_id, job_index)] = record
            if not pieces[task_id]:
                record.completion = release
                continue
            heapq.heappush(releases, (release, sequence, task_id, job_index, 0))
            sequence += 1

    now = 0
    # hosts whose ready set changed at the previous event pick a job again now
    freed: Set[HostKey] = set()
    while True:
        touched: Set[HostKey] = set(freed)
        freed = set()
        while releases and releases[0][0] == now:
            _, _, task_id, job_index, piece_index = heapq.heappop(releases)
            host_key, piece, payload = pieces[task_id][piece_index]
            record = PieceJobRecord(task_id, job_index, piece_index, host_key[0], host_key[1],
                                    now, now + piece.task.deadline)
            trace.piece_jobs.append(record)
            hosts[host_key].ready.append(
                PieceJob(task_id, job_index, piece_index, now, now + piece.task.deadline, payload, record))
            touched.add(host_key)

        selected: Dict[HostKey, PieceJob] = {}
        for host_key, runtime in hosts.items():
            if not runtime.ready:
                continue
            job = min(runtime.ready, key=lambda j: j.key)
            selected[host_key] = job
            if host_key in touched:
                trace.dispatches.append(DispatchRecord(
                    now, host_key[0], host_key[1], job.key, tuple(sorted(j.key for j in runtime.ready))))

        event_times = [now + job.remaining for job in selected.values()]
        if releases:
            event_times.append(releases[0][0])
        if not event_times:
            break
        upcoming = min(event_times)

        for host_key, job in selected.items():
            _run(trace, host_key, hosts[host_key], job, now, upcoming)
            if job.remaining == 0:
                hosts[host_key].ready.remove(job)
                freed.add(host_key)
                job.record.completion = upcoming
                if job.piece_index + 1 < len(pieces[job.task_id]):
                    heapq.heappush(releases, (upcoming, sequence, job.task_id, job.job_index, job.piece_index + 1))
                    sequence += 1
                else:
                    trace.jobs[(job.task_id, job.job_index)].completion = upcoming
        now = upcoming

    logger.info(f"Simulated {len(trace.jobs)} DAG jobs, {len(trace.piece_jobs)} piece jobs up to t={now}")
    return trace


def _run(trace: SimTrace, host_key: HostKey, runtime: HostRuntime, job: PieceJob, start: int, end: int) -> None:
    """Advance ``job`` on its host from ``start`` to ``end`` and record what ran where."""
    offset = job.progress
    span = end - start
    if span <= 0:
        return
    trace.slices.append(ExecutionSlice(host_key[0], host_key[1], job.task_id, job.job_index, job.piece_index,
                                       start, end, offset))
    for iv in job.payload.intervals:
        lo, hi = max(iv.start, offset), min(iv.end, offset + span)
        if lo < hi:
            trace.node_runs.append(NodeRun(job.task_id, job.job_index, iv.node_id,
                                           runtime.processors[iv.processor],
                                           start + lo - offset, start + hi - offset))
    job.progress += span
