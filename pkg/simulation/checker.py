import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

from assignment.plan import SystemPlan
from simulation.trace import NodeRun, SimTrace
from taskmodel.dag_task import DagTask, Violation

logger = logging.getLogger(__name__)


def check_trace(trace: SimTrace, tasks: Sequence[DagTask], plan: SystemPlan) -> List[Violation]:
    """
    Verify a simulation trace against the task set and the plan.

    Checks deadlines of DAG jobs and of every piece job, per-node budgets,
    self-parallelism, processor overlap, precedence and EDF dispatch order.

    Args:
        trace: Output of simulate_plan
        tasks: The simulated task set
        plan: The simulated plan

    Returns:
        List of violations, empty when the run was clean
    """
    dags = {t.task_id: t for t in tasks}
    violations: List[Violation] = []
    violations += _check_deadlines(trace)
    runs_by_job: Dict[Tuple[int, int], List[NodeRun]] = defaultdict(list)
    for run in trace.node_runs:
        runs_by_job[(run.task_id, run.job_index)].append(run)
    for task_id, job_index in sorted(trace.jobs):
        violations += _check_job(dags[task_id], job_index, runs_by_job.get((task_id, job_index), []))
    violations += _check_processors(trace.node_runs, plan.m)
    violations += _check_edf_order(trace)
    if violations:
        logger.info(f"Trace check found {len(violations)} violations")
    return violations


def _check_deadlines(trace: SimTrace) -> List[Violation]:
    violations = []
    for (task_id, job_index), job in sorted(trace.jobs.items()):
        if job.completion is None or job.completion > job.deadline:
            violations.append(Violation(
                "deadline", f"task {task_id} job {job_index}",
                f"completed at {job.completion}, deadline {job.deadline}"))
    for piece in trace.piece_jobs:
        if piece.completion is None or piece.completion > piece.deadline:
            violations.append(Violation(
                "piece-deadline", f"task {piece.task_id} job {piece.job_index} piece {piece.piece_index}",
                f"completed at {piece.completion}, reported deadline {piece.deadline}"))
    return violations


def _check_job(dag: DagTask, job_index: int, runs: List[NodeRun]) -> List[Violation]:
    violations = []
    element = f"task {dag.task_id} job {job_index}"
    by_node: Dict[int, List[NodeRun]] = defaultdict(list)
    for run in runs:
        by_node[run.node_id].append(run)

    dummies = {dag.source, dag.sink}
    for node_id in dag.real_nodes:
        received = sum(r.end - r.start for r in by_node.get(node_id, []))
        if received != dag.wcets[node_id]:
            violations.append(Violation(
                "budget", f"{element} node {node_id}",
                f"received {received} ticks, WCET {dag.wcets[node_id]}"))
        ordered = sorted(by_node.get(node_id, []), key=lambda r: r.start)
        for first, second in zip(ordered, ordered[1:]):
            if second.start < first.end:
                violations.append(Violation(
                    "self-parallel", f"{element} node {node_id}",
                    f"runs on P{first.processor} and P{second.processor} at t={second.start}"))

    for u, v in dag.edges:
        if u in dummies or v in dummies or not by_node.get(u) or not by_node.get(v):
            continue
        finished = max(r.end for r in by_node[u])
        started = min(r.start for r in by_node[v])
        if started < finished:
            violations.append(Violation(
                "precedence", f"{element} edge {u}->{v}",
                f"node {v} started at {started} before node {u} finished at {finished}"))
    return violations


def _check_processors(runs: List[NodeRun], m: int) -> List[Violation]:
    violations = []
    by_processor: Dict[int, List[NodeRun]] = defaultdict(list)
    for run in runs:
        if not 0 <= run.processor < m:
            violations.append(Violation("processor", f"P{run.processor}", f"outside platform of {m}"))
        by_processor[run.processor].append(run)
    for processor, items in sorted(by_processor.items()):
        items.sort(key=lambda r: (r.start, r.end))
        for first, second in zip(items, items[1:]):
            if second.start < first.end:
                violations.append(Violation(
                    "processor-overlap", f"P{processor}",
                    f"task {first.task_id} node {first.node_id} and task {second.task_id} "
                    f"node {second.node_id} overlap at t={second.start}"))
    return violations


def _check_edf_order(trace: SimTrace) -> List[Violation]:
    violations = []
    for record in trace.dispatches:
        if record.ready and record.chosen != min(record.ready):
            violations.append(Violation(
                "edf-order", f"{record.host.value} {record.host_id} at t={record.time}",
                f"dispatched {record.chosen} while {min(record.ready)} was ready"))
    return violations
