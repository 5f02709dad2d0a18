import logging
from fractions import Fraction
from typing import List, Optional, Sequence

from analysis.admission import admission_for
from analysis.edf_tests import FAST, density_schedulable
from analysis.seq_task import SeqTask
from assignment.plan import FailureReason, GangPiece, PayloadMode, PlanOutcome, SystemPlan
from assignment.sfs import AssignmentState, order_by_deadline
from flattening.mcnaughton import flatten_dag
from flattening.sizing import Infeasible, graham_cluster_size, graham_makespan
from taskmodel.dag_task import DagTask, is_heavy, longest_path, require_valid, volume
from taskmodel.segmentation import segment

logger = logging.getLogger(__name__)

FEDERATED = "fs"


def bin_accepts(members: List[SeqTask], candidate: SeqTask) -> bool:
    """Utilisation test when every task has an implicit deadline, density test otherwise."""
    tasks = members + [candidate]
    if all(t.deadline == t.period for t in tasks):
        return sum((t.utilisation for t in tasks), Fraction(0)) <= 1
    return density_schedulable(tasks)


def federated_assign(tasks: Sequence[DagTask], m: int, mode: str = FAST) -> SystemPlan:
    """
    Federated scheduling baseline: dedicated Graham-sized clusters for heavy
    tasks, first-fit bins for light ones, no skipping and no splitting.

    Args:
        tasks: Valid DAG tasks
        m: Number of identical processors
        mode: Recorded on the plan; the baseline's tests do not depend on it

    Returns:
        The SystemPlan, failing on the first task that cannot be placed
    """
    for dag in tasks:
        require_valid(dag)
    state = AssignmentState(SystemPlan(m, FEDERATED, mode), admission_for(mode))
    ordered = order_by_deadline(tasks)
    heavy = [t for t in ordered if is_heavy(t)]
    light = [t for t in ordered if not is_heavy(t)]

    for dag in heavy + light:
        if volume(dag) == 0:
            state.plan.placements[dag.task_id] = []
            continue
        reason = _place_heavy(dag, state) if is_heavy(dag) else _place_light(dag, state)
        if reason is not None:
            state.plan.outcome = PlanOutcome.failure(dag.task_id, reason)
            break
    logger.info(f"FS on m={m}: {state.plan.outcome}, {len(state.plan.clusters)} clusters, {len(state.plan.bins)} bins")
    return state.plan


def _place_heavy(dag: DagTask, state: AssignmentState) -> Optional[FailureReason]:
    work, path = volume(dag), longest_path(dag)
    width = graham_cluster_size(work, path, dag.deadline)
    if isinstance(width, Infeasible):
        return FailureReason.LONGEST_PATH_EXCEEDS_DEADLINE
    if width > state.free_processors:
        return FailureReason.INSUFFICIENT_PROCESSORS
    budget = graham_makespan(work, path, width)
    cluster = state.open_cluster(width)
    state.place(cluster, GangPiece(dag.task_id, 0, SeqTask(budget, dag.deadline, dag.period), 0,
                                   PayloadMode.WORK_CONSERVING))
    return None


def _place_light(dag: DagTask, state: AssignmentState) -> Optional[FailureReason]:
    work = volume(dag)
    if work > dag.deadline:
        return FailureReason.INSUFFICIENT_PROCESSORS
    candidate = SeqTask(work, dag.deadline, dag.period)
    piece = GangPiece(dag.task_id, 0, candidate, 0, PayloadMode.SEQUENTIAL, flatten_dag(segment(dag), 1))
    for host in state.plan.bins:
        if bin_accepts(host.tasks, candidate):
            state.place(host, piece)
            return None
    if state.free_processors < 1:
        return FailureReason.INSUFFICIENT_PROCESSORS
    state.place(state.open_bin(), piece)
    return None
