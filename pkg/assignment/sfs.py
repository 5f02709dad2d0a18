import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from analysis.admission import AdmissionTest, admission_for
from analysis.edf_tests import FAST
from analysis.seq_task import SeqTask
from assignment.plan import (
    Bin,
    Cluster,
    FailureReason,
    GangPiece,
    HostKind,
    PayloadMode,
    PieceLocation,
    PlanOutcome,
    SystemPlan,
)
from flattening.mcnaughton import flatten_dag, leftover_dag
from flattening.sizing import Infeasible, SizingMode, cluster_size_requirements
from taskmodel.dag_task import DagTask, is_heavy, require_valid, volume
from taskmodel.segmentation import SegmentedDag, segment

logger = logging.getLogger(__name__)

SFS = "sfs"


@dataclass
class AssignmentState:
    """Mutable bookkeeping shared by both passes."""

    plan: SystemPlan
    admission: AdmissionTest
    next_processor: int = 0
    skipped: List[DagTask] = field(default_factory=list)

    @property
    def free_processors(self) -> int:
        return self.plan.m - self.next_processor

    def open_cluster(self, width: int) -> Cluster:
        processors = tuple(range(self.next_processor, self.next_processor + width))
        self.next_processor += width
        cluster = Cluster(len(self.plan.clusters), processors)
        self.plan.clusters.append(cluster)
        return cluster

    def open_bin(self) -> Bin:
        host = Bin(len(self.plan.bins), self.next_processor)
        self.next_processor += 1
        self.plan.bins.append(host)
        return host

    def place(self, host, piece: GangPiece) -> None:
        kind = HostKind.CLUSTER if isinstance(host, Cluster) else HostKind.BIN
        host_id = host.cluster_id if kind == HostKind.CLUSTER else host.bin_id
        host.members.append(piece)
        if piece.zero_laxity:
            host.closed = True
        self.plan.placements.setdefault(piece.task_id, []).append(
            PieceLocation(kind, host_id, piece.piece_index))
        logger.debug(
            f"Task {piece.task_id} piece {piece.piece_index} -> {kind.value} {host_id} "
            f"(C={piece.task.exec_time}, D={piece.task.deadline}, offset={piece.release_offset})")

    def open_clusters(self) -> List[Cluster]:
        """Open clusters by non-increasing normalised gross utilisation, then id."""
        candidates = [c for c in self.plan.clusters if not c.closed]
        return sorted(candidates, key=lambda c: (-c.normalised_gross_utilisation, c.cluster_id))

    def open_bins(self) -> List[Bin]:
        """Open bins by non-increasing density, then id."""
        candidates = [b for b in self.plan.bins if not b.closed]
        return sorted(candidates, key=lambda b: (-b.density, b.bin_id))


def order_by_deadline(tasks: Sequence[DagTask]) -> List[DagTask]:
    """Non-increasing min(D, T); ties by ascending task id."""
    return sorted(tasks, key=lambda t: (-t.min_deadline_period, t.task_id))


def sfs_assign(tasks: Sequence[DagTask], m: int, mode: str = FAST) -> SystemPlan:
    """
    Segmented-flattened-and-split assignment of a DAG task set to m processors.

    Args:
        tasks: Valid DAG tasks
        m: Number of identical processors
        mode: Admission test mode ("fast" or "exact")

    Returns:
        The SystemPlan; its outcome tells whether every task was placed
    """
    for dag in tasks:
        require_valid(dag)
    state = AssignmentState(SystemPlan(m, SFS, mode), admission_for(mode))
    pass1(tasks, state)
    plan = pass2(state)
    logger.info(f"SFS on m={m} ({mode}): {plan.outcome}, {len(plan.clusters)} clusters, {len(plan.bins)} bins")
    return plan


def pass1(tasks: Sequence[DagTask], state: AssignmentState) -> AssignmentState:
    """Dedicated clusters for heavy tasks, first-fit bins for light ones; skip what does not fit."""
    for dag in order_by_deadline(tasks):
        work = volume(dag)
        if work == 0:
            state.plan.placements[dag.task_id] = []
            continue
        if is_heavy(dag):
            placed = _place_heavy_dedicated(dag, state)
        else:
            placed = _place_light_first_fit(dag, work, state)
        if not placed:
            logger.debug(f"Task {dag.task_id} skipped in first pass")
            state.skipped.append(dag)
    return state


def _place_heavy_dedicated(dag: DagTask, state: AssignmentState) -> bool:
    sizing = cluster_size_requirements(dag)
    if isinstance(sizing, Infeasible) or sizing.width > state.free_processors:
        return False
    cluster = state.open_cluster(sizing.width)
    if sizing.mode == SizingMode.FLATTENED:
        piece = GangPiece(dag.task_id, 0, SeqTask(sizing.budget, dag.deadline, dag.period), 0,
                          PayloadMode.FLATTENED, sizing.schedule)
    else:
        piece = GangPiece(dag.task_id, 0, SeqTask(sizing.budget, dag.deadline, dag.period), 0,
                          PayloadMode.WORK_CONSERVING)
    state.place(cluster, piece)
    return True


def _place_light_first_fit(dag: DagTask, work: int, state: AssignmentState) -> bool:
    if work > dag.deadline:
        return False
    payload = flatten_dag(segment(dag), 1)
    piece = GangPiece(dag.task_id, 0, SeqTask(work, dag.deadline, dag.period), 0,
                      PayloadMode.SEQUENTIAL, payload)
    for host in state.plan.bins:
        if state.admission.admits(host.tasks, work, dag.deadline, dag.period):
            state.place(host, piece)
            return True
    if state.free_processors >= 1:
        state.place(state.open_bin(), piece)
        return True
    return False


def pass2(state: AssignmentState) -> SystemPlan:
    """Split every skipped task over existing hosts; the first failure ends the assignment."""
    while state.free_processors > 0:
        state.open_bin()

    for dag in state.skipped:
        sdag = segment(dag)
        if sdag.serial_lower_bound > dag.deadline:
            outcome = PlanOutcome.failure(dag.task_id, FailureReason.SERIAL_BOUND_EXCEEDS_DEADLINE)
        elif is_heavy(dag):
            outcome = split_heavy(dag, state, sdag)
        else:
            outcome = split_light(dag, state, sdag)
        if not outcome.success:
            logger.info(f"Task {dag.task_id} could not be split: {outcome.reason.value}")
            state.plan.outcome = outcome
            return state.plan
    return state.plan


def split_heavy(dag: DagTask, state: AssignmentState, sdag: Optional[SegmentedDag] = None) -> PlanOutcome:
    """Split a heavy task over the open clusters."""
    sdag = segment(dag) if sdag is None else sdag
    return _split_over_clusters(dag, sdag, 0, 0, state)


def split_light(dag: DagTask, state: AssignmentState, sdag: Optional[SegmentedDag] = None) -> PlanOutcome:
    """
    Split a light task over open bins as a sequential task, then over clusters.

    On bins the task executes its width-1 flattening, so every zero-laxity
    piece holds a prefix of it and the rest continues as a rump.

    Args:
        dag: A light, unassigned task
        state: Assignment state after the first pass
        sdag: Its segmentation, computed when omitted

    Returns:
        Success, or the failure reported by the cluster phase
    """
    rump = segment(dag) if sdag is None else sdag
    remaining = rump.volume
    elapsed = 0
    piece_index = 0

    for host in state.open_bins():
        if remaining > dag.deadline - elapsed:
            break
        remaining_deadline = dag.deadline - elapsed
        sequential = flatten_dag(rump, 1)
        if state.admission.admits(host.tasks, remaining, remaining_deadline, dag.period):
            state.place(host, GangPiece(dag.task_id, piece_index,
                                        SeqTask(remaining, remaining_deadline, dag.period),
                                        elapsed, PayloadMode.SEQUENTIAL, sequential))
            return PlanOutcome.ok()

        budget = state.admission.max_zero_laxity_budget(host.tasks, dag.period, remaining)
        if budget == 0:
            continue
        if budget >= remaining:
            state.place(host, GangPiece(dag.task_id, piece_index, SeqTask(remaining, remaining, dag.period),
                                        elapsed, PayloadMode.SEQUENTIAL, sequential))
            return PlanOutcome.ok()
        state.place(host, GangPiece(dag.task_id, piece_index, SeqTask(budget, budget, dag.period),
                                    elapsed, PayloadMode.SEQUENTIAL, sequential.prefix(budget)))
        rump = leftover_dag(rump, sequential, budget)
        remaining -= budget
        elapsed += budget
        piece_index += 1

    return _split_over_clusters(dag, rump, elapsed, piece_index, state)


def _split_over_clusters(dag: DagTask,
                         rump: SegmentedDag,
                         elapsed: int,
                         piece_index: int,
                         state: AssignmentState) -> PlanOutcome:
    """
    Place ``rump`` over open clusters, releasing ``elapsed`` ticks after the DAG.

    Each cluster either takes the whole rump as a final piece with the
    remaining deadline, or a zero-laxity prefix sized by sensitivity analysis
    after which the cluster is closed.
    """
    for cluster in state.open_clusters():
        remaining_deadline = dag.deadline - elapsed
        schedule = flatten_dag(rump, cluster.width)
        if schedule.length <= remaining_deadline and state.admission.admits(
                cluster.tasks, schedule.length, remaining_deadline, dag.period):
            state.place(cluster, GangPiece(dag.task_id, piece_index,
                                           SeqTask(schedule.length, remaining_deadline, dag.period),
                                           elapsed, PayloadMode.FLATTENED, schedule))
            return PlanOutcome.ok()

        budget = state.admission.max_zero_laxity_budget(cluster.tasks, dag.period, schedule.length)
        if budget == 0:
            continue
        if budget >= schedule.length:
            if elapsed + schedule.length > dag.deadline:
                return PlanOutcome.failure(dag.task_id, FailureReason.DEADLINE_EXHAUSTED)
            state.place(cluster, GangPiece(dag.task_id, piece_index,
                                           SeqTask(schedule.length, schedule.length, dag.period),
                                           elapsed, PayloadMode.FLATTENED, schedule))
            return PlanOutcome.ok()

        if elapsed + budget >= dag.deadline:
            # deadline reached before the DAG completes
            return PlanOutcome.failure(dag.task_id, FailureReason.DEADLINE_EXHAUSTED)
        state.place(cluster, GangPiece(dag.task_id, piece_index, SeqTask(budget, budget, dag.period),
                                       elapsed, PayloadMode.FLATTENED, schedule.prefix(budget)))
        rump = leftover_dag(rump, schedule, budget)
        elapsed += budget
        piece_index += 1

    return PlanOutcome.failure(dag.task_id, FailureReason.NO_CLUSTERS)
